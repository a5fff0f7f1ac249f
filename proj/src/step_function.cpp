#include "freenorm/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace freenorm {

namespace {
constexpr double kValueClamp = 1e-13;
constexpr double kSubmajTol = 1e-12;
}  // namespace

StepFunction::StepFunction(std::vector<Step> steps) {
  steps_.reserve(steps.size());
  double prev = std::numeric_limits<double>::infinity();
  for (Step s : steps) {
    if (s.width < 0.0) throw std::invalid_argument("StepFunction: negative width");
    if (s.width == 0.0) continue;
    if (s.value < 0.0) {
      if (s.value < -kValueClamp)
        throw std::invalid_argument("StepFunction: negative value");
      s.value = 0.0;
    }
    if (s.value > prev + kValueClamp)
      throw std::invalid_argument("StepFunction: values not non-increasing");
    s.value = std::min(s.value, prev);
    prev = s.value;
    if (!steps_.empty() && steps_.back().value == s.value)
      steps_.back().width += s.width;
    else
      steps_.push_back(s);
  }
}

StepFunction StepFunction::from_unsorted(std::vector<Step> steps) {
  std::stable_sort(steps.begin(), steps.end(),
                   [](const Step& a, const Step& b) { return a.value > b.value; });
  return StepFunction(std::move(steps));
}

StepFunction StepFunction::merge(const std::vector<StepFunction>& parts) {
  std::vector<Step> all;
  for (const auto& p : parts)
    all.insert(all.end(), p.steps_.begin(), p.steps_.end());
  return from_unsorted(std::move(all));
}

double StepFunction::total_width() const {
  double w = 0.0;
  for (const Step& s : steps_) w += s.width;
  return w;
}

double StepFunction::integral() const {
  double v = 0.0;
  for (const Step& s : steps_) v += s.value * s.width;
  return v;
}

double StepFunction::sup() const { return steps_.empty() ? 0.0 : steps_.front().value; }

double StepFunction::value_at(double t) const {
  if (t <= 0.0) throw std::invalid_argument("StepFunction::value_at: t <= 0");
  double cum = 0.0;
  for (const Step& s : steps_) {
    cum += s.width;
    if (t < cum) return s.value;
  }
  return 0.0;
}

double StepFunction::k_functional(double t) const {
  if (t <= 0.0) throw std::invalid_argument("k_functional: t <= 0");
  double acc = 0.0, left = t;
  for (const Step& s : steps_) {
    const double take = std::min(left, s.width);
    acc += s.value * take;
    left -= take;
    if (left <= 0.0) break;
  }
  return acc;
}

double StepFunction::lp_norm(double p) const {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  if (std::isinf(p)) return sup();
  double acc = 0.0;
  for (const Step& s : steps_) acc += std::pow(s.value, p) * s.width;
  return std::pow(acc, 1.0 / p);
}

StepFunction StepFunction::head(double mass) const {
  std::vector<Step> out;
  double left = mass;
  for (const Step& s : steps_) {
    if (left <= 0.0) break;
    out.push_back({s.value, std::min(left, s.width)});
    left -= s.width;
  }
  return StepFunction(std::move(out));
}

StepFunction StepFunction::clipped(double c) const {
  std::vector<Step> out;
  out.reserve(steps_.size());
  for (const Step& s : steps_) out.push_back({std::min(c, s.value), s.width});
  return StepFunction(std::move(out));
}

std::vector<double> StepFunction::breakpoints() const {
  std::vector<double> pts;
  double cum = 0.0;
  for (const Step& s : steps_) {
    cum += s.width;
    if (pts.empty() || cum > pts.back()) pts.push_back(cum);
  }
  return pts;
}

double k_functional(const StepFunction& mu, double t) { return mu.k_functional(t); }

bool submajorizes(const StepFunction& f, const StepFunction& g) {
  std::vector<double> pts = f.breakpoints();
  const std::vector<double> pg = g.breakpoints();
  pts.insert(pts.end(), pg.begin(), pg.end());
  if (pts.empty()) return true;
  std::sort(pts.begin(), pts.end());
  for (double t : pts) {
    if (t <= 0.0) continue;
    if (g.k_functional(t) > f.k_functional(t) + kSubmajTol) return false;
  }
  return true;
}

}  // namespace freenorm
