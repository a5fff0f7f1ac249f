#include "freenorm/free_family.hpp"

#include <cmath>
#include <stdexcept>

namespace freenorm {

namespace {
constexpr double kCenterTol = 1e-10;
constexpr double kMassTol = 1e-12;
}  // namespace

FreeFamily::FreeFamily(std::vector<Operator> xs, ConditionalExpectation base, bool centered)
    : xs_(std::move(xs)), base_(std::move(base)), centered_(centered) {
  if (xs_.empty()) throw std::invalid_argument("FreeFamily: empty family");
  scalar_base_ = base_.form() == ConditionalExpectation::Form::Scalar;
  for (const Operator& x : xs_) {
    if (std::abs(x.algebra().total_mass() - 1.0) > kMassTol)
      throw std::invalid_argument("FreeFamily: summand algebra mass != 1");
    if (!scalar_base_ && !x.algebra().same_shape(xs_[0].algebra()))
      throw std::invalid_argument(
          "FreeFamily: non-scalar base requires a common summand algebra");
  }
  if (centered_) {
    for (const Operator& x : xs_)
      if (base_.apply(x).sup_norm() > kCenterTol)
        throw std::invalid_argument("FreeFamily: summand is not centered");
  }
}

FreeFamily FreeFamily::over_scalars(std::vector<Operator> xs, bool centered) {
  return FreeFamily(std::move(xs), ConditionalExpectation::scalar(), centered);
}

Operator FreeFamily::conditioned_operand(const std::vector<Operator>& ys, Side side) const {
  if (ys.size() != xs_.size())
    throw std::invalid_argument("conditioned_operand: family size mismatch");
  if (side == Side::Diagonal)
    throw std::invalid_argument("conditioned_operand: diagonal has no operand");
  if (scalar_base_) {
    double acc = 0.0;
    for (const Operator& y : ys) acc += trace(y.adjoint() * y).real();
    return Operator::scalar(Complex(std::sqrt(std::max(acc, 0.0)), 0.0));
  }
  Operator sum = Operator::zero(ys[0].algebra_ptr());
  for (const Operator& y : ys)
    sum += side == Side::Column ? y.adjoint() * y : y * y.adjoint();
  return sqrt_psd(base_.apply(sum));
}

StepFunction diagonal_mu(const std::vector<Operator>& xs) {
  return singular_value_function(direct_sum(xs));
}

}  // namespace freenorm
