#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "freenorm/algebra.hpp"
#include "freenorm/spaces.hpp"

namespace freenorm {

/// Trace-preserving conditional expectation onto a subalgebra, acting
/// blockwise on operators of a fixed algebra shape.
///
/// Forms:
///  - Scalar:       x -> (trace(x) / total_mass) * 1, range C * 1
///  - Pinching:     zero all entries between different groups of a basis
///                  partition, one partition per block
///  - PartialTrace: block of dim a*b viewed as A tensor B; trace out B:
///                  x -> (ptr_B(x) / b) tensor 1_B
///  - Doubled:      on a doubled algebra (two half-mass copies),
///                  (x, y) -> (E(x+y)/2, E(x+y)/2) for an inner E
///  - Compose:      ordered list, applied left to right
class ConditionalExpectation {
public:
  enum class Form { Scalar, Pinching, PartialTrace, Doubled, Compose };

  static ConditionalExpectation scalar();
  /// groups_per_block[b] partitions {0..dim_b-1}.
  static ConditionalExpectation pinching(std::vector<std::vector<std::vector<int>>> groups_per_block);
  /// legs_per_block[b] = (a, b) with dim = a*b; the second leg is traced out.
  static ConditionalExpectation partial_trace(std::vector<std::pair<int, int>> legs_per_block);
  static ConditionalExpectation doubled(ConditionalExpectation inner);
  static ConditionalExpectation compose(std::vector<ConditionalExpectation> list);

  /// Descriptors: "scalar", "pinch:[[0,1],[2,3]]" (per block, '|'-separated),
  /// "ptrace:legs=2x2"; compositions joined with ';' (applied left to right).
  static ConditionalExpectation parse(std::string_view descriptor);
  std::string descriptor() const;

  Form form() const { return form_; }

  Operator apply(const Operator& x) const;

  /// Adjoint with respect to the unweighted Frobenius pairing
  /// sum_b tr(x_b^* y_b); used by gradient-based solvers.
  Operator apply_adjoint(const Operator& x) const;

private:
  ConditionalExpectation() = default;

  Form form_ = Form::Scalar;
  std::vector<std::vector<std::vector<int>>> groups_;
  std::vector<std::pair<int, int>> legs_;
  std::vector<ConditionalExpectation> children_;
};

enum class Side { Column, Row, Diagonal };

/// Conditioned norm of a finite family sharing one algebra:
///  - Column:   || (E sum_i x_i^* x_i)^{1/2} ||_E
///  - Row:      || (E sum_i x_i x_i^*)^{1/2} ||_E
///  - Diagonal: || direct sum of the x_i ||_E
double conditioned_norm(const ConditionalExpectation& ce, const std::vector<Operator>& xs,
                        Side side, const SymmetricSpace& space);

/// x = u * alpha with alpha = (E x^* x)^{1/2} and u = x * pinv(alpha).
/// u is not renormalized: ||E u^* u||_inf <= 1 and
/// support(alpha) <= E u^* u hold as theorems, not by construction.
struct EPolarDecomposition {
  Operator u;
  Operator alpha;
};
EPolarDecomposition e_polar_decompose(const ConditionalExpectation& ce, const Operator& x);

/// Norming element z for the column-E_p norm of x: |trace(z^* x)| equals
/// || (E x^* x)^{1/2} ||_p and z has column-E_{p'} norm at most 1
/// (p' = p/(p-1), with 1 <-> infinity).  For p = infinity, z = u * a with a
/// the trace-normalized projection onto the top spectral block of alpha.
struct DualityExtremizer {
  Operator z;
  double value = 0.0;
};
DualityExtremizer duality_extremizer(const ConditionalExpectation& ce, const Operator& x,
                                     double p);

}  // namespace freenorm
