#pragma once

#include <vector>

namespace freenorm {

/// One step of a non-increasing right-continuous function: constant `value`
/// on an interval of length `width`.
struct Step {
  double value = 0.0;
  double width = 0.0;
};

/// Non-increasing right-continuous step function on (0, infinity), identically
/// zero beyond its support.  This is the home of generalized singular value
/// functions mu(x); widths play the role of trace mass.
class StepFunction {
public:
  StepFunction() = default;

  /// Steps must already be sorted by non-increasing value; zero-width steps
  /// are dropped, tiny negative values are clamped to zero.
  explicit StepFunction(std::vector<Step> steps);

  /// Sorts (value, width) pairs into non-increasing value order.
  static StepFunction from_unsorted(std::vector<Step> steps);

  /// Concatenation of several rearrangements, re-sorted; mu of a direct sum.
  static StepFunction merge(const std::vector<StepFunction>& parts);

  const std::vector<Step>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  double total_width() const;
  double integral() const;  // ∫ mu
  double sup() const;       // mu(0+), 0 if empty

  /// Right-continuous evaluation; 0 for t >= total width.  Throws for t <= 0.
  double value_at(double t) const;

  /// K(t, mu) = ∫_0^t mu, exact on steps.  Throws for t <= 0.
  double k_functional(double t) const;

  /// (∫ mu^p)^{1/p} for finite p >= 1, sup for p = infinity.
  double lp_norm(double p) const;
  double l2_norm() const { return lp_norm(2.0); }

  /// Head restriction mu * 1_{(0, mass]}.
  StepFunction head(double mass) const;

  /// Pointwise min(c, mu).
  StepFunction clipped(double c) const;

  /// Cumulative widths where the function may jump (ascending, deduplicated).
  std::vector<double> breakpoints() const;

private:
  std::vector<Step> steps_;
};

double k_functional(const StepFunction& mu, double t);

/// True iff ∫_0^t mu(g) <= ∫_0^t mu(f) + 1e-12 for all t; checked at every
/// breakpoint of either function, which is exact for piecewise-linear K.
bool submajorizes(const StepFunction& f, const StepFunction& g);

}  // namespace freenorm
