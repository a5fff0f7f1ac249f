#pragma once

#include <map>
#include <string>
#include <vector>

#include "freenorm/algebra.hpp"
#include "freenorm/conditioned.hpp"
#include "freenorm/report.hpp"
#include "freenorm/rmt.hpp"
#include "freenorm/spaces.hpp"
#include "freenorm/step_function.hpp"

namespace freenorm {

/// Self-adjoint diagonal summands on mass-one blocks whose spectra are
/// closed under negation with matching widths.  The constructor pairs every
/// eigenvalue index with a partner carrying the opposite value (zeros pair
/// with themselves); projections invariant under the pairing play the role
/// of even sets, diagonal sign patterns the role of odd functions.
class SymmetricDiagonalFamily {
public:
  explicit SymmetricDiagonalFamily(std::vector<std::vector<double>> diagonals);

  int count() const { return static_cast<int>(diagonals_.size()); }
  const std::vector<std::vector<double>>& diagonals() const { return diagonals_; }
  const std::vector<std::vector<int>>& partners() const { return partner_; }

  /// The summands as operators, each on its own block.
  const std::vector<Operator>& operators() const { return operators_; }

  /// Rearrangement of the diagonal embedding sum_i x_i (x) e_i
  /// (total mass = count).
  StepFunction embedding_mu() const;

private:
  std::vector<std::vector<double>> diagonals_;
  std::vector<std::vector<int>> partner_;
  std::vector<Operator> operators_;
};

/// Head/tail splitting of each summand at the level t reached by the
/// rearrangement of the diagonal embedding at mass one:
///   x_i = t u_i + v_i gamma_i,   u_i = v_i + w_i,
/// where q_i is an even projection selecting spectral mass exactly one
/// across the family (all of |x_i| > t, a deterministic tie rule at
/// |x_i| = t), v_i = sign(x_i) q_i, w_i = x_i (1 - q_i) / t, and
/// gamma_i = (|x_i| - t)_+ q_i.  With t = 0 the tail is empty and the
/// selection pads with zero modes.
struct JsDecomposition {
  double t = 0.0;
  std::vector<std::vector<double>> q;  // 0/1 head indicator per index
  std::vector<Operator> u, v, w, gamma;

  /// Keys: "reconstruction" (sup defect of the splitting identity),
  /// "cut" (|selected mass - 1|), "head_match" (sup distance between the
  /// selected rearrangement and the head of the embedding), "u_sup"
  /// (largest contraction norm), "disjoint" (largest |v_ij w_ij|),
  /// "v_support_mass" (total support mass of the sign parts).
  std::map<std::string, double> diagnostics;
};

/// Throws std::invalid_argument when no even selection cuts the spectral
/// mass exactly at one; the message reports the achievable mass and the
/// residual.
JsDecomposition js_decomposition(const SymmetricDiagonalFamily& f);

struct JsOptions {
  ModelConfig model;
  double slack = 0.05;
};

/// Constant-3 two-sided comparison between the modeled norm of the free
/// sum and the head-plus-tail norm of the diagonal embedding, for a base
/// space normalized on the unit interval; plus the contraction bound on
/// the modeled head sum and the exactness diagnostics of the splitting.
std::vector<ReportRow> verify_js(const SymmetricDiagonalFamily& f,
                                 const SymmetricSpace& base, const JsOptions& options,
                                 const std::string& instance_id);

/// Increasing sequence of conditional expectations on a single matrix
/// block, ending with the identity: levels()[k] applied after levels()[j]
/// gives the coarser of the two, and the last level fixes every element.
class MatrixFiltration {
public:
  MatrixFiltration(AlgebraPtr algebra, std::vector<ConditionalExpectation> levels);

  /// Pinchings onto block-diagonal algebras given by successively coarser
  /// partitions of the basis indices; the last partition must be the
  /// single full block.  scalar_root prepends the normalized-trace level.
  static MatrixFiltration from_partitions(int dim,
                                          const std::vector<std::vector<std::vector<int>>>& partitions,
                                          bool scalar_root = false);

  int levels() const { return static_cast<int>(levels_.size()); }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const ConditionalExpectation& expectation(int k) const { return levels_.at(k); }
  Operator apply(int k, const Operator& x) const { return levels_.at(k).apply(x); }

private:
  AlgebraPtr algebra_;
  std::vector<ConditionalExpectation> levels_;
};

/// Successive-difference decomposition: d_0 = E_0 x and
/// d_k = E_k x - E_{k-1} x, so the parts telescope to x exactly and
/// E_{k-1} d_k = 0.
std::vector<Operator> martingale_differences(const MatrixFiltration& filtration,
                                             const Operator& x);

/// The three square-function quantities attached to a filtration:
/// column   |( |E_0 x|^2 + sum_k E_{k-1} |d_k|^2 )^{1/2}|_E,
/// row      the same with adjoints,
/// diagonal the norm of the difference embedding sum_k d_k (x) e_k.
struct BurkholderNorms {
  double column = 0.0;
  double row = 0.0;
  double diagonal = 0.0;
};
BurkholderNorms burkholder_norms(const MatrixFiltration& filtration, const Operator& x,
                                 const SymmetricSpace& space);

}  // namespace freenorm
