#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "freenorm/algebra.hpp"
#include "freenorm/random.hpp"
#include "freenorm/report.hpp"
#include "freenorm/rmt.hpp"
#include "freenorm/solver.hpp"
#include "freenorm/spaces.hpp"

namespace freenorm {

/// Matrix coefficients on the n^d positive words (i_1, ..., i_d) over n
/// generators: a dense table of m x m complex matrices in lexicographic
/// order, first letter most significant.  The associated operator is
/// G(x) = sum_i x(i) (x) g_{i_1} ... g_{i_d} with the g_j free Haar
/// unitaries; its norms are bracketed by flattening norms below.
struct WordCoefficients {
  int n = 1;  // generators
  int d = 1;  // word length
  int m = 1;  // coefficient dimension

  /// n^d matrices, entry index(word) holds the coefficient of `word`.
  std::vector<Matrix> table;

  WordCoefficients(int n, int d, int m);

  int word_count() const;  // n^d

  /// Lexicographic rank of a word given as d letters in [0, n).
  int index(const std::vector<int>& word) const;
  Matrix& at(const std::vector<int>& word);
  const Matrix& at(const std::vector<int>& word) const;

  /// Scalar coefficient 1 on every word (m = 1).
  static WordCoefficients ones(int n, int d);
  /// Single nonzero coefficient c on `word`.
  static WordCoefficients single(int n, int d, const std::vector<int>& word,
                                 const Matrix& c);
  /// Independent centered Gaussian entries; real = true drops the
  /// imaginary parts.
  static WordCoefficients random(int n, int d, int m, Rng& gen, bool real = false);
};

WordCoefficients operator+(const WordCoefficients& a, const WordCoefficients& b);
WordCoefficients operator-(const WordCoefficients& a, const WordCoefficients& b);
WordCoefficients operator*(double s, const WordCoefficients& a);
double coefficient_l2(const WordCoefficients& a);  // sqrt(sum_i tau(a_i^* a_i))

/// Level-k rearrangement of a word table into an (m n^{d-k}) x (m n^k)
/// matrix: the block at (row word alpha, column word beta) is the
/// coefficient of the concatenation alpha beta, where alpha runs over the
/// first d-k letters and beta over the last k.  Row index = rank(alpha) * m
/// + r, and likewise for columns.  Singular values carry width 1/m, so the
/// trace of the ambient algebra is the plain matrix trace divided by m.
struct Flattening {
  int n = 1, d = 1, m = 1, k = 0;
  Matrix matrix;

  /// Rearrangement of |matrix|: singular values, width 1/m each.
  StepFunction mu() const;
  double norm(const SymmetricSpace& space) const;
  double sup_norm() const;    // largest singular value
  double trace_norm() const;  // sum of singular values / m
  double hs_norm() const;     // sqrt(sum of squared singular values / m)
};

Flattening flatten(const WordCoefficients& x, int k);
WordCoefficients unflatten(const Flattening& f);

/// Moves letters between the row and column words by pure index
/// arithmetic; an exact bijection with flatten(unflatten(f), k2).
Flattening reflatten(const Flattening& f, int k2);

/// Square m n^d picture of a flattening inside the full d-fold tensor
/// algebra; shares all singular values with the rectangular matrix (padded
/// by zeros).  Intended for small sizes.
Matrix embed_square(const Flattening& f);

/// Residuals of the exact algebraic identities tying flattenings together.
/// Keys: "trace_match"     |sum_i tau(a_i^* b_i) - Tr([a]_k^* [b]_k) / m|,
///                         maximized over k and k2;
///       "partial_trace"   [a]_k^* [b]_k versus the sum over the leading
///                         k2-k column letters of [a]_{k2}^* [b]_{k2};
///       "absorb_right"    [a]_k alpha versus the level-k reflattening of
///                         [a]_{k2} (1 (x) alpha);
///       "expand_right"    [a]_{k2} (1 (x) alpha) versus the level-k2
///                         reflattening of [a]_k alpha.
/// alpha is an (m n^k) square matrix acting on the column space at level k.
std::map<std::string, double> check_word_identities(const WordCoefficients& a,
                                                    const WordCoefficients& b,
                                                    const Matrix& alpha, int k, int k2);

/// Number of reduced words of length <= L over n free generators and their
/// inverses.
long ball_size(int n, int L);

/// Largest singular value of the compression of G(x) to the span of
/// reduced words of length <= L (left multiplication with cancellation).
/// A certified lower bound for the operator norm of G(x): non-decreasing
/// in L and never above the sum of flattening sup norms.  Throws when
/// m * ball_size(n, L) exceeds the memory budget.
double compression_lower_bound(const WordCoefficients& x, int L);

/// Two-sided operator bracket for G(x) in a symmetric norm: every
/// flattening norm is a lower bound for the norm of G(x), the sum over
/// levels an upper bound, and for the trace norm the minimum over levels
/// is already an upper bound.
struct WordBounds {
  double lower = 0.0;     // max_k of the flattening norms
  double upper = 0.0;     // sum over k
  double l1_upper = 0.0;  // min_k of the flattening trace norms
};
WordBounds buchholz_bounds(const WordCoefficients& x, const SymmetricSpace& space);

/// Haar substitution model: per trial, G_N(x) = sum_i x(i) (x)
/// U_{i_1} ... U_{i_d} with independent N x N Haar unitaries U_1..U_n, on a
/// mass-one block of dimension m N.  Returns the per-trial statistics of
/// the symmetric norm of the sample rearrangement.
ModelNorm word_model_norm(const WordCoefficients& x, const SymmetricSpace& space,
                          const ModelConfig& cfg);

/// Per-trial rearrangements of the modeled word sum, reusable across spaces.
std::vector<StepFunction> word_model_mu_samples(const WordCoefficients& x,
                                                const ModelConfig& cfg);
/// Per-trial statistics of a symmetric norm over precomputed rearrangements.
ModelNorm evaluate_model_norm(const std::vector<StepFunction>& mus,
                              const SymmetricSpace& space);

/// Splitting x = y_0 + ... + y_d minimizing sum_k || level-k flattening of
/// y_k ||_1; the last part absorbs the residual so the sum is exact.
struct WordDecomposition {
  std::vector<WordCoefficients> parts;
  double value = 0.0;  // exact objective at the returned point
  bool converged = true;
};
WordDecomposition word_optimal_decomposition(const WordCoefficients& x,
                                             const SolverConfig& cfg = {});

struct LengthdOptions {
  std::vector<SymmetricSpace> spaces;
  ModelConfig model;
  SolverConfig solver;
  double slack = 0.05;  // statistical tolerance against model estimates
};

/// Rows per space: the operator sandwich against the model, the
/// length-plus-one two-sided estimates through the minimizing splitting,
/// the squared-constant bracket, the constant-free upper estimate on
/// spaces interpolating between the trace and Hilbert norms, the
/// sharpened lower estimate on spaces interpolating between the Hilbert
/// and operator norms, and the per-level contraction of the splitting.
std::vector<ReportRow> verify_lengthd(const WordCoefficients& x,
                                      const LengthdOptions& options,
                                      const std::string& instance_id);

/// Dense table serialization: "words n d m" header then one line per table
/// entry in row-major order, real and imaginary parts alternating.
void save_word_coefficients(std::ostream& out, const WordCoefficients& x);
WordCoefficients load_word_coefficients(std::istream& in);

}  // namespace freenorm
