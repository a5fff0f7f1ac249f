#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "freenorm/step_function.hpp"

namespace freenorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// One matrix summand of a tracial algebra: dimension and trace mass.
struct AlgebraBlock {
  int dim = 0;
  double mass = 0.0;
};

/// Finite direct sum of complex matrix blocks.  The trace is
/// tau(x) = sum_b mass_b * tr(x_b) / dim_b, so tau(1) = sum_b mass_b.
class TracialAlgebra {
public:
  explicit TracialAlgebra(std::vector<AlgebraBlock> blocks);

  static TracialAlgebra single(int dim, double mass = 1.0);
  /// The scalars C as a 1x1 block of mass 1 (common amalgam N).
  static TracialAlgebra scalars();

  const std::vector<AlgebraBlock>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  int dim(std::size_t b) const { return blocks_[b].dim; }
  double mass(std::size_t b) const { return blocks_[b].mass; }
  /// Per-eigenvalue width mass_b / dim_b of block b.
  double weight(std::size_t b) const { return blocks_[b].mass / blocks_[b].dim; }
  double total_mass() const;

  bool same_shape(const TracialAlgebra& other) const;

private:
  std::vector<AlgebraBlock> blocks_;
};

using AlgebraPtr = std::shared_ptr<const TracialAlgebra>;

AlgebraPtr make_algebra(std::vector<AlgebraBlock> blocks);
AlgebraPtr make_single_block(int dim, double mass = 1.0);
AlgebraPtr make_scalars();

/// Element of a tracial algebra: one dense matrix per block.
class Operator {
public:
  Operator(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static Operator zero(AlgebraPtr algebra);
  static Operator identity(AlgebraPtr algebra);
  /// Operator on a fresh single-block mass-1 algebra.
  static Operator from_matrix(Matrix m, double mass = 1.0);
  static Operator scalar(Complex value);  // on TracialAlgebra::scalars()

  const TracialAlgebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Matrix& block(std::size_t b) const { return blocks_[b]; }
  Matrix& block(std::size_t b) { return blocks_[b]; }

  Operator adjoint() const;
  Operator operator-() const;
  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex c);

  /// ||x - x*||_inf; 0 for exactly self-adjoint data.
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = 1e-9) const;

  double sup_norm() const;  // largest singular value across blocks
  double l2_norm() const;   // sqrt(tau(x* x))

private:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
};

Operator operator+(Operator lhs, const Operator& rhs);
Operator operator-(Operator lhs, const Operator& rhs);
Operator operator*(const Operator& lhs, const Operator& rhs);
Operator operator*(Complex c, Operator x);
Operator operator*(double c, Operator x);

Complex trace(const Operator& x);
/// Real Hilbert-Schmidt pairing Re tau(x* y).
double inner(const Operator& x, const Operator& y);

/// Spectral transform f(x) of a self-adjoint x.  Throws std::invalid_argument
/// if ||x - x*||_inf > 1e-9 (1 + ||x||_inf); the defect is never symmetrized
/// away silently.
Operator functional_calculus(const Operator& x, const std::function<double(double)>& f);

/// x = u * a with a = (x* x)^{1/2} psd and u a partial isometry onto the
/// support of a; singular values below 1e-12 * sigma_max count as zero.
struct PolarDecomposition {
  Operator u;
  Operator a;
};
PolarDecomposition polar_decompose(const Operator& x);

/// Generalized singular value function: each singular value of block b enters
/// with width mass_b / dim_b.
StepFunction singular_value_function(const Operator& x);

/// Spectral projection 1_{(rel_tol * ||x||_inf, inf)}(x) of a psd x.
Operator support_projection(const Operator& x, double rel_tol = 1e-12);

/// (x)^{1/2} for psd x, clamping tiny negative eigenvalues to zero.
Operator sqrt_psd(const Operator& x);

/// Moore-Penrose inverse of a psd x with relative spectral cutoff.
Operator pinv_psd(const Operator& x, double rel_tol = 1e-12);

/// Direct sum: operators become consecutive blocks of one algebra, keeping
/// each copy's masses (the diagonal embedding into M tensor l_inf).
Operator direct_sum(const std::vector<Operator>& xs);

/// Smallest eigenvalue of p x p restricted to the range of the projection p;
/// +infinity if p = 0.
double restricted_min_eig(const Operator& x, const Operator& p, double rel_tol = 1e-12);

}  // namespace freenorm
