#pragma once

#include <vector>

#include "freenorm/algebra.hpp"
#include "freenorm/conditioned.hpp"

namespace freenorm {

/// Finite family (M_i, tau_i, x_i) of mass-1 tracial algebras amalgamated
/// over a common subalgebra N by one conditional expectation per summand.
/// With the scalar expectation, N = C and summand algebras may differ;
/// otherwise all summands must share one algebra shape.
class FreeFamily {
public:
  FreeFamily(std::vector<Operator> xs, ConditionalExpectation base, bool centered = true);

  /// N = C family; checks each tau(x_i) = 0 when centered.
  static FreeFamily over_scalars(std::vector<Operator> xs, bool centered = true);

  std::size_t size() const { return xs_.size(); }
  const Operator& x(std::size_t i) const { return xs_[i]; }
  const std::vector<Operator>& members() const { return xs_; }
  const ConditionalExpectation& base() const { return base_; }
  bool scalar_base() const { return scalar_base_; }
  bool centered() const { return centered_; }

  /// (E sum_i y_i^* y_i)^{1/2} (column) or (E sum_i y_i y_i^*)^{1/2} (row),
  /// as an operator of the amalgam: the scalars for a scalar base, the
  /// common algebra otherwise.  The y_i must match the family's algebras.
  Operator conditioned_operand(const std::vector<Operator>& ys, Side side) const;

private:
  std::vector<Operator> xs_;
  ConditionalExpectation base_;
  bool scalar_base_ = true;
  bool centered_ = true;
};

/// mu of sum_i x_i tensor e_i: the direct sum over one copy of each summand.
StepFunction diagonal_mu(const std::vector<Operator>& xs);

}  // namespace freenorm
