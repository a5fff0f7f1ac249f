#include "freenorm/conditioned.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace freenorm {

namespace {

void validate_partition(const std::vector<std::vector<int>>& groups, int dim) {
  std::vector<bool> seen(dim, false);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("pinching: empty group");
    for (int i : g) {
      if (i < 0 || i >= dim) throw std::invalid_argument("pinching: index out of range");
      if (seen[i]) throw std::invalid_argument("pinching: repeated index");
      seen[i] = true;
    }
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("pinching: partition does not cover the block");
}

Matrix pinch_block(const Matrix& m, const std::vector<std::vector<int>>& groups) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const auto& g : groups)
    for (int i : g)
      for (int j : g) out(i, j) = m(i, j);
  return out;
}

/// (ptr_B(x) / b) tensor 1_B for x on A tensor B, dims (a, b).
Matrix partial_trace_block(const Matrix& m, int a, int b) {
  Matrix reduced = Matrix::Zero(a, a);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      Complex acc(0.0, 0.0);
      for (int k = 0; k < b; ++k) acc += m(i * b + k, j * b + k);
      reduced(i, j) = acc / static_cast<double>(b);
    }
  Matrix out = Matrix::Zero(a * b, a * b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j)
      for (int k = 0; k < b; ++k) out(i * b + k, j * b + k) = reduced(i, j);
  return out;
}

}  // namespace

ConditionalExpectation ConditionalExpectation::scalar() {
  ConditionalExpectation ce;
  ce.form_ = Form::Scalar;
  return ce;
}

ConditionalExpectation ConditionalExpectation::pinching(
    std::vector<std::vector<std::vector<int>>> groups_per_block) {
  if (groups_per_block.empty()) throw std::invalid_argument("pinching: no blocks");
  ConditionalExpectation ce;
  ce.form_ = Form::Pinching;
  ce.groups_ = std::move(groups_per_block);
  return ce;
}

ConditionalExpectation ConditionalExpectation::partial_trace(
    std::vector<std::pair<int, int>> legs_per_block) {
  if (legs_per_block.empty()) throw std::invalid_argument("partial_trace: no blocks");
  for (auto [a, b] : legs_per_block)
    if (a <= 0 || b <= 0) throw std::invalid_argument("partial_trace: bad leg split");
  ConditionalExpectation ce;
  ce.form_ = Form::PartialTrace;
  ce.legs_ = std::move(legs_per_block);
  return ce;
}

ConditionalExpectation ConditionalExpectation::doubled(ConditionalExpectation inner) {
  ConditionalExpectation ce;
  ce.form_ = Form::Doubled;
  ce.children_.push_back(std::move(inner));
  return ce;
}

ConditionalExpectation ConditionalExpectation::compose(
    std::vector<ConditionalExpectation> list) {
  if (list.empty()) throw std::invalid_argument("compose: empty list");
  ConditionalExpectation ce;
  ce.form_ = Form::Compose;
  ce.children_ = std::move(list);
  return ce;
}

Operator ConditionalExpectation::apply(const Operator& x) const {
  switch (form_) {
    case Form::Scalar: {
      const Complex t = trace(x) / x.algebra().total_mass();
      Operator out = Operator::identity(x.algebra_ptr());
      return out *= t;
    }
    case Form::Pinching: {
      if (groups_.size() != x.block_count())
        throw std::invalid_argument("pinching: block count mismatch");
      std::vector<Matrix> blocks;
      for (std::size_t b = 0; b < x.block_count(); ++b) {
        validate_partition(groups_[b], x.algebra().dim(b));
        blocks.push_back(pinch_block(x.block(b), groups_[b]));
      }
      return Operator(x.algebra_ptr(), std::move(blocks));
    }
    case Form::PartialTrace: {
      if (legs_.size() != x.block_count())
        throw std::invalid_argument("partial_trace: block count mismatch");
      std::vector<Matrix> blocks;
      for (std::size_t b = 0; b < x.block_count(); ++b) {
        auto [a, bb] = legs_[b];
        if (a * bb != x.algebra().dim(b))
          throw std::invalid_argument("partial_trace: leg split does not match dim");
        blocks.push_back(partial_trace_block(x.block(b), a, bb));
      }
      return Operator(x.algebra_ptr(), std::move(blocks));
    }
    case Form::Doubled: {
      const std::size_t nb = x.block_count();
      if (nb % 2 != 0) throw std::invalid_argument("doubled: odd block count");
      const std::size_t half = nb / 2;
      std::vector<AlgebraBlock> half_blocks;
      std::vector<Matrix> avg;
      for (std::size_t b = 0; b < half; ++b) {
        if (x.algebra().dim(b) != x.algebra().dim(b + half))
          throw std::invalid_argument("doubled: halves do not match");
        half_blocks.push_back({x.algebra().dim(b), 2.0 * x.algebra().mass(b)});
        avg.push_back(0.5 * (x.block(b) + x.block(b + half)));
      }
      const Operator inner_arg(make_algebra(std::move(half_blocks)), std::move(avg));
      const Operator e = children_[0].apply(inner_arg);
      std::vector<Matrix> blocks(nb);
      for (std::size_t b = 0; b < half; ++b) {
        blocks[b] = e.block(b);
        blocks[b + half] = e.block(b);
      }
      return Operator(x.algebra_ptr(), std::move(blocks));
    }
    case Form::Compose: {
      Operator out = x;
      for (const auto& child : children_) out = child.apply(out);
      return out;
    }
  }
  throw std::logic_error("ConditionalExpectation::apply: bad form");
}

Operator ConditionalExpectation::apply_adjoint(const Operator& x) const {
  switch (form_) {
    case Form::Scalar: {
      // <E y, x>_F = (tau(y)/T) * sum_b tr(x_b), so E^t(x)_b = (w_b/n_b) * s / T.
      Complex s(0.0, 0.0);
      for (std::size_t b = 0; b < x.block_count(); ++b) s += x.block(b).trace();
      s /= x.algebra().total_mass();
      std::vector<Matrix> blocks;
      for (std::size_t b = 0; b < x.block_count(); ++b)
        blocks.push_back(x.algebra().weight(b) * s *
                         Matrix::Identity(x.algebra().dim(b), x.algebra().dim(b)));
      return Operator(x.algebra_ptr(), std::move(blocks));
    }
    case Form::Pinching:
    case Form::PartialTrace:
      return apply(x);  // self-adjoint for the unweighted pairing
    case Form::Doubled: {
      const std::size_t half = x.block_count() / 2;
      std::vector<AlgebraBlock> half_blocks;
      std::vector<Matrix> sum;
      for (std::size_t b = 0; b < half; ++b) {
        half_blocks.push_back({x.algebra().dim(b), 2.0 * x.algebra().mass(b)});
        sum.push_back(0.5 * (x.block(b) + x.block(b + half)));
      }
      const Operator inner_arg(make_algebra(std::move(half_blocks)), std::move(sum));
      const Operator e = children_[0].apply_adjoint(inner_arg);
      std::vector<Matrix> blocks(x.block_count());
      for (std::size_t b = 0; b < half; ++b) {
        blocks[b] = e.block(b);
        blocks[b + half] = e.block(b);
      }
      return Operator(x.algebra_ptr(), std::move(blocks));
    }
    case Form::Compose: {
      Operator out = x;
      for (auto it = children_.rbegin(); it != children_.rend(); ++it)
        out = it->apply_adjoint(out);
      return out;
    }
  }
  throw std::logic_error("ConditionalExpectation::apply_adjoint: bad form");
}

namespace {

std::vector<std::vector<int>> parse_partition(std::string_view s) {
  // "[[0,1],[2,3]]"
  std::vector<std::vector<int>> groups;
  std::size_t i = 0;
  auto expect = [&](char c) {
    if (i >= s.size() || s[i] != c)
      throw std::invalid_argument("pinching descriptor: expected '" + std::string(1, c) + "'");
    ++i;
  };
  expect('[');
  while (i < s.size() && s[i] != ']') {
    expect('[');
    std::vector<int> group;
    while (i < s.size() && s[i] != ']') {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])))) ++j;
      if (j == i) throw std::invalid_argument("pinching descriptor: expected index");
      group.push_back(std::stoi(std::string(s.substr(i, j - i))));
      i = j;
      if (i < s.size() && s[i] == ',') ++i;
    }
    expect(']');
    groups.push_back(std::move(group));
    if (i < s.size() && s[i] == ',') ++i;
  }
  expect(']');
  if (i != s.size()) throw std::invalid_argument("pinching descriptor: trailing characters");
  return groups;
}

ConditionalExpectation parse_single(std::string_view d) {
  if (d == "scalar") return ConditionalExpectation::scalar();
  if (d.rfind("pinch:", 0) == 0) {
    std::vector<std::vector<std::vector<int>>> per_block;
    std::string_view rest = d.substr(6);
    while (!rest.empty()) {
      const std::size_t bar = rest.find('|');
      per_block.push_back(parse_partition(rest.substr(0, bar)));
      if (bar == std::string_view::npos) break;
      rest = rest.substr(bar + 1);
    }
    return ConditionalExpectation::pinching(std::move(per_block));
  }
  if (d.rfind("ptrace:legs=", 0) == 0) {
    std::vector<std::pair<int, int>> legs;
    std::string_view rest = d.substr(12);
    while (!rest.empty()) {
      const std::size_t bar = rest.find('|');
      const std::string part(rest.substr(0, bar));
      const std::size_t x = part.find('x');
      if (x == std::string::npos)
        throw std::invalid_argument("ptrace descriptor: expected AxB");
      legs.emplace_back(std::stoi(part.substr(0, x)), std::stoi(part.substr(x + 1)));
      if (bar == std::string_view::npos) break;
      rest = rest.substr(bar + 1);
    }
    return ConditionalExpectation::partial_trace(std::move(legs));
  }
  throw std::invalid_argument("ConditionalExpectation::parse: unknown descriptor '" +
                              std::string(d) + "'");
}

}  // namespace

ConditionalExpectation ConditionalExpectation::parse(std::string_view d) {
  std::vector<ConditionalExpectation> parts;
  while (!d.empty()) {
    const std::size_t semi = d.find(';');
    parts.push_back(parse_single(d.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    d = d.substr(semi + 1);
  }
  if (parts.empty()) throw std::invalid_argument("ConditionalExpectation::parse: empty");
  if (parts.size() == 1) return parts[0];
  return compose(std::move(parts));
}

std::string ConditionalExpectation::descriptor() const {
  switch (form_) {
    case Form::Scalar:
      return "scalar";
    case Form::Pinching: {
      std::ostringstream out;
      out << "pinch:";
      for (std::size_t b = 0; b < groups_.size(); ++b) {
        if (b) out << '|';
        out << '[';
        for (std::size_t g = 0; g < groups_[b].size(); ++g) {
          if (g) out << ',';
          out << '[';
          for (std::size_t i = 0; i < groups_[b][g].size(); ++i) {
            if (i) out << ',';
            out << groups_[b][g][i];
          }
          out << ']';
        }
        out << ']';
      }
      return out.str();
    }
    case Form::PartialTrace: {
      std::ostringstream out;
      out << "ptrace:legs=";
      for (std::size_t b = 0; b < legs_.size(); ++b) {
        if (b) out << '|';
        out << legs_[b].first << 'x' << legs_[b].second;
      }
      return out.str();
    }
    case Form::Doubled:
      return "doubled(" + children_[0].descriptor() + ")";
    case Form::Compose: {
      std::string out;
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ';';
        out += children_[i].descriptor();
      }
      return out;
    }
  }
  return "";
}

double conditioned_norm(const ConditionalExpectation& ce, const std::vector<Operator>& xs,
                        Side side, const SymmetricSpace& space) {
  if (xs.empty()) throw std::invalid_argument("conditioned_norm: empty family");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!xs[i].algebra().same_shape(xs[0].algebra()))
      throw std::invalid_argument("conditioned_norm: family algebras differ");
  switch (side) {
    case Side::Column:
    case Side::Row: {
      Operator sum = Operator::zero(xs[0].algebra_ptr());
      for (const Operator& x : xs) {
        const Operator y = side == Side::Column ? x.adjoint() * x : x * x.adjoint();
        sum += y;
      }
      return operator_norm(space, sqrt_psd(ce.apply(sum)));
    }
    case Side::Diagonal:
      return operator_norm(space, direct_sum(xs));
  }
  throw std::logic_error("conditioned_norm: bad side");
}

EPolarDecomposition e_polar_decompose(const ConditionalExpectation& ce, const Operator& x) {
  const Operator alpha = sqrt_psd(ce.apply(x.adjoint() * x));
  const Operator u = x * pinv_psd(alpha);
  return {u, alpha};
}

DualityExtremizer duality_extremizer(const ConditionalExpectation& ce, const Operator& x,
                                     double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("duality_extremizer: p < 1");
  const EPolarDecomposition ep = e_polar_decompose(ce, x);
  const Operator& alpha = ep.alpha;
  const double amax = alpha.sup_norm();
  if (amax == 0.0) return {Operator::zero(x.algebra_ptr()), 0.0};
  Operator z = Operator::zero(x.algebra_ptr());
  if (std::isinf(p)) {
    // Trace-normalized projection onto the top spectral block of alpha.
    const double lo = amax * (1.0 - 1e-10);
    const Operator top =
        functional_calculus(alpha, [lo](double v) { return v >= lo ? 1.0 : 0.0; });
    const double mass = trace(top).real();
    z = ep.u * ((1.0 / mass) * top);
  } else {
    const double cutoff = 1e-12 * amax;
    const double q = p - 1.0;
    // alpha^{p-1} on its support; for p = 1 this is the support projection.
    const Operator apow = functional_calculus(
        alpha, [cutoff, q](double v) { return v > cutoff ? std::pow(v, q) : 0.0; });
    const double denom = std::pow(singular_value_function(alpha).lp_norm(p), q);
    z = ep.u * ((denom > 0.0 ? 1.0 / denom : 0.0) * apow);
  }
  const double value = std::abs(trace(z.adjoint() * x));
  return {z, value};
}

}  // namespace freenorm
