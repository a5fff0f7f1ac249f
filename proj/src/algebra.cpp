#include "freenorm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace freenorm {

namespace {
constexpr double kHermRelTol = 1e-9;

void check_same_algebra(const Operator& a, const Operator& b) {
  if (!a.algebra().same_shape(b.algebra()))
    throw std::invalid_argument("Operator: algebra shape mismatch");
}

/// Largest singular value of a single matrix.
double matrix_sup_norm(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}
}  // namespace

TracialAlgebra::TracialAlgebra(std::vector<AlgebraBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("TracialAlgebra: no blocks");
  for (const auto& b : blocks_) {
    if (b.dim <= 0) throw std::invalid_argument("TracialAlgebra: block dim <= 0");
    if (!(b.mass > 0.0)) throw std::invalid_argument("TracialAlgebra: block mass <= 0");
  }
}

TracialAlgebra TracialAlgebra::single(int dim, double mass) {
  return TracialAlgebra({AlgebraBlock{dim, mass}});
}

TracialAlgebra TracialAlgebra::scalars() { return single(1, 1.0); }

double TracialAlgebra::total_mass() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += b.mass;
  return t;
}

bool TracialAlgebra::same_shape(const TracialAlgebra& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].dim != other.blocks_[i].dim) return false;
    if (std::abs(blocks_[i].mass - other.blocks_[i].mass) > 1e-12) return false;
  }
  return true;
}

AlgebraPtr make_algebra(std::vector<AlgebraBlock> blocks) {
  return std::make_shared<const TracialAlgebra>(std::move(blocks));
}

AlgebraPtr make_single_block(int dim, double mass) {
  return make_algebra({AlgebraBlock{dim, mass}});
}

AlgebraPtr make_scalars() { return make_single_block(1, 1.0); }

Operator::Operator(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw std::invalid_argument("Operator: null algebra");
  if (blocks_.size() != algebra_->block_count())
    throw std::invalid_argument("Operator: block count mismatch");
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const int n = algebra_->dim(b);
    if (blocks_[b].rows() != n || blocks_[b].cols() != n)
      throw std::invalid_argument("Operator: block dimension mismatch");
  }
}

Operator Operator::zero(AlgebraPtr algebra) {
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < algebra->block_count(); ++b)
    blocks.push_back(Matrix::Zero(algebra->dim(b), algebra->dim(b)));
  return Operator(std::move(algebra), std::move(blocks));
}

Operator Operator::identity(AlgebraPtr algebra) {
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < algebra->block_count(); ++b)
    blocks.push_back(Matrix::Identity(algebra->dim(b), algebra->dim(b)));
  return Operator(std::move(algebra), std::move(blocks));
}

Operator Operator::from_matrix(Matrix m, double mass) {
  if (m.rows() != m.cols()) throw std::invalid_argument("from_matrix: not square");
  auto alg = make_single_block(static_cast<int>(m.rows()), mass);
  std::vector<Matrix> blocks;
  blocks.push_back(std::move(m));
  return Operator(std::move(alg), std::move(blocks));
}

Operator Operator::scalar(Complex value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return from_matrix(std::move(m));
}

Operator Operator::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(m.adjoint());
  return Operator(algebra_, std::move(blocks));
}

Operator Operator::operator-() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const Matrix& m : blocks_) blocks.push_back(-m);
  return Operator(algebra_, std::move(blocks));
}

Operator& Operator::operator+=(const Operator& rhs) {
  check_same_algebra(*this, rhs);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] += rhs.blocks_[b];
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  check_same_algebra(*this, rhs);
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] -= rhs.blocks_[b];
  return *this;
}

Operator& Operator::operator*=(Complex c) {
  for (Matrix& m : blocks_) m *= c;
  return *this;
}

double Operator::hermiticity_defect() const {
  double d = 0.0;
  for (const Matrix& m : blocks_) d = std::max(d, matrix_sup_norm(Matrix(m - m.adjoint())));
  return d;
}

bool Operator::is_hermitian(double rel_tol) const {
  return hermiticity_defect() <= rel_tol * (1.0 + sup_norm());
}

double Operator::sup_norm() const {
  double s = 0.0;
  for (const Matrix& m : blocks_) s = std::max(s, matrix_sup_norm(m));
  return s;
}

double Operator::l2_norm() const {
  double acc = 0.0;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    acc += algebra_->weight(b) * blocks_[b].squaredNorm();
  return std::sqrt(acc);
}

Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }

Operator operator*(const Operator& lhs, const Operator& rhs) {
  check_same_algebra(lhs, rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(lhs.block_count());
  for (std::size_t b = 0; b < lhs.block_count(); ++b)
    blocks.push_back(lhs.block(b) * rhs.block(b));
  return Operator(lhs.algebra_ptr(), std::move(blocks));
}

Operator operator*(Complex c, Operator x) { return x *= c; }
Operator operator*(double c, Operator x) { return x *= Complex(c, 0.0); }

Complex trace(const Operator& x) {
  Complex acc(0.0, 0.0);
  for (std::size_t b = 0; b < x.block_count(); ++b)
    acc += x.algebra().weight(b) * x.block(b).trace();
  return acc;
}

double inner(const Operator& x, const Operator& y) {
  double acc = 0.0;
  for (std::size_t b = 0; b < x.block_count(); ++b)
    acc += x.algebra().weight(b) * (x.block(b).adjoint() * y.block(b)).trace().real();
  return acc;
}

Operator functional_calculus(const Operator& x, const std::function<double(double)>& f) {
  const double defect = x.hermiticity_defect();
  if (defect > kHermRelTol * (1.0 + x.sup_norm()))
    throw std::invalid_argument("functional_calculus: operator is not self-adjoint");
  std::vector<Matrix> blocks;
  blocks.reserve(x.block_count());
  for (std::size_t b = 0; b < x.block_count(); ++b) {
    const Matrix herm = 0.5 * (x.block(b) + x.block(b).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("functional_calculus: eigensolver failed");
    Eigen::VectorXd vals = es.eigenvalues();
    for (int i = 0; i < vals.size(); ++i) vals(i) = f(vals(i));
    blocks.push_back(es.eigenvectors() * vals.asDiagonal() *
                     es.eigenvectors().adjoint());
  }
  return Operator(x.algebra_ptr(), std::move(blocks));
}

PolarDecomposition polar_decompose(const Operator& x) {
  const double cutoff = 1e-12 * x.sup_norm();
  std::vector<Matrix> ublocks, ablocks;
  for (std::size_t b = 0; b < x.block_count(); ++b) {
    Eigen::JacobiSVD<Matrix> svd(x.block(b), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const int n = static_cast<int>(x.block(b).rows());
    int r = 0;
    while (r < n && sv(r) > cutoff) ++r;
    const Matrix& U = svd.matrixU();
    const Matrix& V = svd.matrixV();
    ublocks.push_back(U.leftCols(r) * V.leftCols(r).adjoint());
    ablocks.push_back(V * sv.asDiagonal() * V.adjoint());
  }
  return {Operator(x.algebra_ptr(), std::move(ublocks)),
          Operator(x.algebra_ptr(), std::move(ablocks))};
}

StepFunction singular_value_function(const Operator& x) {
  std::vector<Step> steps;
  for (std::size_t b = 0; b < x.block_count(); ++b) {
    const double w = x.algebra().weight(b);
    Eigen::JacobiSVD<Matrix> svd(x.block(b));
    const Eigen::VectorXd& sv = svd.singularValues();
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 0.0) steps.push_back({sv(i), w});
  }
  return StepFunction::from_unsorted(std::move(steps));
}

Operator support_projection(const Operator& x, double rel_tol) {
  const double cutoff = rel_tol * x.sup_norm();
  return functional_calculus(x, [cutoff](double v) { return v > cutoff ? 1.0 : 0.0; });
}

Operator sqrt_psd(const Operator& x) {
  return functional_calculus(x, [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

Operator pinv_psd(const Operator& x, double rel_tol) {
  const double cutoff = rel_tol * x.sup_norm();
  return functional_calculus(x, [cutoff](double v) { return v > cutoff ? 1.0 / v : 0.0; });
}

Operator direct_sum(const std::vector<Operator>& xs) {
  if (xs.empty()) throw std::invalid_argument("direct_sum: empty family");
  std::vector<AlgebraBlock> blocks;
  std::vector<Matrix> data;
  for (const Operator& x : xs)
    for (std::size_t b = 0; b < x.block_count(); ++b) {
      blocks.push_back({x.algebra().dim(b), x.algebra().mass(b)});
      data.push_back(x.block(b));
    }
  return Operator(make_algebra(std::move(blocks)), std::move(data));
}

double restricted_min_eig(const Operator& x, const Operator& p, double rel_tol) {
  double result = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < x.block_count(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.block(b));
    if (es.info() != Eigen::Success)
      throw std::runtime_error("restricted_min_eig: eigensolver failed");
    const Eigen::VectorXd& vals = es.eigenvalues();
    std::vector<int> keep;
    for (int i = 0; i < vals.size(); ++i)
      if (vals(i) > 1.0 - 1e-6) keep.push_back(i);
    if (keep.empty()) continue;
    Matrix basis(p.block(b).rows(), keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
      basis.col(j) = es.eigenvectors().col(keep[j]);
    const Matrix compressed = basis.adjoint() * x.block(b) * basis;
    Eigen::SelfAdjointEigenSolver<Matrix> es2(compressed);
    if (es2.eigenvalues().size() > 0)
      result = std::min(result, es2.eigenvalues()(0));
  }
  (void)rel_tol;
  return result;
}

}  // namespace freenorm
