#include "freenorm/spaces.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace freenorm {

namespace {
double unit_interval_norm(const SymmetricSpace& s) {
  return s.norm(StepFunction({{1.0, 1.0}}));
}

std::string format_param(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}
}  // namespace

SymmetricSpace SymmetricSpace::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("SymmetricSpace::lp: p < 1");
  SymmetricSpace s;
  s.kind_ = Kind::Lp;
  s.param_ = p;
  return s;
}

SymmetricSpace SymmetricSpace::linf() {
  return lp(std::numeric_limits<double>::infinity());
}

SymmetricSpace SymmetricSpace::l1_plus_t_linf(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("SymmetricSpace::l1_plus_t_linf: t <= 0");
  SymmetricSpace s;
  s.kind_ = Kind::L1PlusTLinf;
  s.param_ = t;
  return s;
}

SymmetricSpace SymmetricSpace::linf_cap_sl1(double sc) {
  if (!(sc > 0.0)) throw std::invalid_argument("SymmetricSpace::linf_cap_sl1: s <= 0");
  SymmetricSpace s;
  s.kind_ = Kind::LinfCapSL1;
  s.param_ = sc;
  return s;
}

SymmetricSpace SymmetricSpace::ze2(const SymmetricSpace& base) {
  if (base.kind_ == Kind::ZE2)
    throw std::invalid_argument("SymmetricSpace::ze2: nested ze2 base");
  const double u = unit_interval_norm(base);
  if (std::abs(u - 1.0) > 1e-12)
    throw std::invalid_argument(
        "SymmetricSpace::ze2: base not normalized, ||1_[0,1]|| != 1");
  SymmetricSpace s;
  s.kind_ = Kind::ZE2;
  s.ze2_scale_ = 1.0;
  s.base_ = std::make_shared<const SymmetricSpace>(base);
  return s;
}

SymmetricSpace SymmetricSpace::ze2_rescaled(const SymmetricSpace& base) {
  if (base.kind_ == Kind::ZE2)
    throw std::invalid_argument("SymmetricSpace::ze2_rescaled: nested ze2 base");
  const double u = unit_interval_norm(base);
  if (!(u > 0.0)) throw std::invalid_argument("SymmetricSpace::ze2_rescaled: degenerate base");
  SymmetricSpace s;
  s.kind_ = Kind::ZE2;
  s.ze2_scale_ = 1.0 / u;
  s.base_ = std::make_shared<const SymmetricSpace>(base);
  return s;
}

SymmetricSpace SymmetricSpace::parse(std::string_view d) {
  auto parse_number = [](std::string_view v) -> double {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    const std::string str(v);
    double out;
    try {
      out = std::stod(str, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("SymmetricSpace::parse: bad number '" + str + "'");
    }
    if (pos != str.size())
      throw std::invalid_argument("SymmetricSpace::parse: bad number '" + str + "'");
    return out;
  };
  if (d.rfind("lp:", 0) == 0) return lp(parse_number(d.substr(3)));
  if (d.rfind("l1+tlinf:", 0) == 0) return l1_plus_t_linf(parse_number(d.substr(9)));
  if (d.rfind("linf^sl1:", 0) == 0) return linf_cap_sl1(parse_number(d.substr(9)));
  if (d.rfind("ze2(", 0) == 0 && d.back() == ')')
    return ze2(parse(d.substr(4, d.size() - 5)));
  throw std::invalid_argument("SymmetricSpace::parse: unknown descriptor '" +
                              std::string(d) + "'");
}

std::string SymmetricSpace::descriptor() const {
  switch (kind_) {
    case Kind::Lp:
      return "lp:" + format_param(param_);
    case Kind::L1PlusTLinf:
      return "l1+tlinf:" + format_param(param_);
    case Kind::LinfCapSL1:
      return "linf^sl1:" + format_param(param_);
    case Kind::ZE2:
      return "ze2(" + base_->descriptor() + ")";
  }
  return "";
}

const SymmetricSpace& SymmetricSpace::base() const {
  if (kind_ != Kind::ZE2) throw std::logic_error("SymmetricSpace::base: not ze2");
  return *base_;
}

double SymmetricSpace::norm(const StepFunction& mu) const {
  switch (kind_) {
    case Kind::Lp:
      return mu.lp_norm(param_);
    case Kind::L1PlusTLinf:
      return mu.k_functional(param_);
    case Kind::LinfCapSL1:
      return std::max(mu.sup(), param_ * mu.integral());
    case Kind::ZE2: {
      const double head = ze2_scale_ * base_->norm(mu.head(1.0));
      const double level = mu.total_width() > 1.0 ? mu.value_at(1.0) : 0.0;
      return head + mu.clipped(level).l2_norm();
    }
  }
  return 0.0;
}

bool SymmetricSpace::is_l1_l2_interpolation() const {
  return kind_ == Kind::Lp && param_ <= 2.0;
}

bool SymmetricSpace::is_l2_linf_interpolation() const {
  return kind_ == Kind::Lp && param_ >= 2.0;
}

double eval_norm(const SymmetricSpace& space, const StepFunction& mu) {
  return space.norm(mu);
}

double ze2_norm(const SymmetricSpace& base, const StepFunction& mu) {
  return SymmetricSpace::ze2(base).norm(mu);
}

double operator_norm(const SymmetricSpace& space, const Operator& x) {
  return space.norm(singular_value_function(x));
}

}  // namespace freenorm
