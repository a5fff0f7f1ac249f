#pragma once

#include <string>
#include <string_view>

#include "freenorm/algebra.hpp"
#include "freenorm/step_function.hpp"

namespace freenorm {

/// Fully symmetric function space norm, evaluated exactly on step functions.
///
/// Kinds:
///  - Lp(p):            (∫ mu^p)^{1/p}, sup for p = infinity
///  - L1PlusTLinf(t):   K(t, mu) = ||.||_{L1 + t Linf}
///  - LinfCapSL1(s):    max(||mu||_inf, s ||mu||_1)
///  - ZE2(base):        ||mu 1_{(0,1]}||_base + ||min(mu(1), mu)||_2,
///                      base normalized so ||1_{[0,1]}||_base = 1
class SymmetricSpace {
public:
  enum class Kind { Lp, L1PlusTLinf, LinfCapSL1, ZE2 };

  static SymmetricSpace lp(double p);
  static SymmetricSpace linf();
  static SymmetricSpace l1_plus_t_linf(double t);
  static SymmetricSpace linf_cap_sl1(double s);
  /// Requires ||1_{[0,1]}||_base = 1; throws otherwise.
  static SymmetricSpace ze2(const SymmetricSpace& base);
  /// Accepts any base and divides it by ||1_{[0,1]}||_base.
  static SymmetricSpace ze2_rescaled(const SymmetricSpace& base);

  /// Descriptors: "lp:2", "lp:inf", "l1+tlinf:0.5", "linf^sl1:2.0",
  /// "ze2(lp:inf)".
  static SymmetricSpace parse(std::string_view descriptor);
  std::string descriptor() const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }  // p, t or s
  const SymmetricSpace& base() const;      // ZE2 only

  double norm(const StepFunction& mu) const;

  /// Exact interpolation-couple flags used by the one-sided constant-2 checks.
  bool is_l1_l2_interpolation() const;
  bool is_l2_linf_interpolation() const;

private:
  SymmetricSpace() = default;

  Kind kind_ = Kind::Lp;
  double param_ = 2.0;
  double ze2_scale_ = 1.0;
  std::shared_ptr<const SymmetricSpace> base_;
};

double eval_norm(const SymmetricSpace& space, const StepFunction& mu);

/// Z_E^2 norm of mu for a base space with ||1_{[0,1]}||_base = 1.
double ze2_norm(const SymmetricSpace& base, const StepFunction& mu);

/// eval_norm of the generalized singular value function of x.
double operator_norm(const SymmetricSpace& space, const Operator& x);

}  // namespace freenorm
