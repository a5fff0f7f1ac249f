#pragma once

#include <map>
#include <string>
#include <vector>

#include "freenorm/free_family.hpp"
#include "freenorm/report.hpp"
#include "freenorm/rmt.hpp"
#include "freenorm/solver.hpp"
#include "freenorm/spaces.hpp"

namespace freenorm {

/// max of the three conditioned norms of a free family.
struct CapNorm {
  double value = 0.0;
  double column = 0.0;
  double row = 0.0;
  double diagonal = 0.0;
};
CapNorm cap_norm(const FreeFamily& family, const SymmetricSpace& space);

/// A splitting x_i = a_i + b_i + d_i with every part centered.
struct Decomposition {
  std::vector<Operator> a, b, d;
};

/// column(a) + row(b) + diagonal(d), evaluated exactly (no smoothing).
double decomposition_objective(const FreeFamily& family, const SymmetricSpace& space,
                               const Decomposition& dec);

/// Infimal-sum norm: minimizes the three-part objective over centered
/// decompositions by smoothed projected gradient descent with continuation,
/// then reports the exact objective at the best witness found.
struct SigmaResult {
  double value = 0.0;
  Decomposition witness;
  bool converged = false;
  int iterations = 0;
};
SigmaResult sigma_norm(const FreeFamily& family, const SymmetricSpace& space,
                       const SolverConfig& cfg = {});

/// Doubling trick: each summand becomes (x_i, -x_i) on two half-mass copies
/// of its algebra; the amalgam expectation is transported accordingly.
FreeFamily symmetrize(const FreeFamily& family);
/// x -> (x, -x) on the doubled algebra.
Operator pi_embed(const Operator& x);
/// The flip (y, z) -> (z, y) on a doubled algebra.
Operator swap_halves(const Operator& x);
/// Component extraction from a doubled algebra back onto `shape`.
Operator half_component(const Operator& x, const AlgebraPtr& shape, int which);

/// Output of the L1 decomposition pipeline over a scalar amalgam:
/// x_i = u_i alpha + beta u_i + u_i gamma_i with u_i gamma_i = delta_i u_i,
/// alpha, beta >= 0 scalars, gamma_i, delta_i psd.
struct AlgebraicDecomposition {
  std::vector<Operator> u, gamma, delta;  // on the original summand algebras
  double alpha = 0.0;
  double beta = 0.0;
  Decomposition witness;  // on the doubled algebras, after antisymmetrization
  double l1_value = 0.0;
  bool converged = false;
  std::map<std::string, double> residuals;
};
AlgebraicDecomposition algebraic_decomposition(const FreeFamily& family,
                                               const SolverConfig& cfg = {});

/// Spectral truncation of a feasible decomposition at level M: with
/// e = 1_{[0,M]}((E sum a_i^* a_i)^{1/2}) and f the row analogue,
/// a_i' = f a_i e + x_i (1 - e), d_i' = f d_i e, b_i' = f b_i e + (1-f) x_i e.
Decomposition truncate_decomposition(const FreeFamily& family, const Decomposition& dec,
                                     double M);

/// norm of a scalar amalgam element c >= 0: c * ||1_(0,1]||_E.
double scalar_norm(const SymmetricSpace& space, double c);

struct VerifyOptions {
  std::vector<SymmetricSpace> spaces;
  ModelConfig model;
  SolverConfig solver;
  double slack = 0.05;
  bool with_sigma = true;     // per-space solver runs
  bool with_pipeline = true;  // L1 pipeline and derived rows
  bool with_truncation = true;
};

/// Rows for the operator-norm sandwich, the two-sided symmetric-space
/// estimates (constants 16 and 12, one-sided 2 on flagged spaces), the
/// exact majorization rows and the constant-4 identities, against
/// Haar-model estimates of the free-product norms.
std::vector<ReportRow> verify_free_sum_inequalities(const FreeFamily& family,
                                                    const VerifyOptions& options,
                                                    const std::string& instance_id);

}  // namespace freenorm
