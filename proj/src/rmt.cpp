#include "freenorm/rmt.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace freenorm {

namespace {

/// Smallest integer replication counts proportional to the blocks'
/// per-eigenvalue weights w_b / n_b; rejects incommensurable weights.
std::vector<int> replication_counts(const TracialAlgebra& alg) {
  const std::size_t nb = alg.block_count();
  std::vector<double> w(nb);
  for (std::size_t b = 0; b < nb; ++b) w[b] = alg.weight(b);
  const double ref = w[0];
  for (int denom = 1; denom <= 4096; ++denom) {
    std::vector<int> counts(nb);
    bool ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      const double r = w[b] / ref * denom;
      counts[b] = static_cast<int>(std::lround(r));
      if (counts[b] < 1 || std::abs(r - counts[b]) > 1e-9 * denom) {
        ok = false;
        break;
      }
    }
    if (ok) {
      int g = 0;
      for (int c : counts) g = std::gcd(g, c);
      for (int& c : counts) c /= g;
      return counts;
    }
  }
  throw std::invalid_argument("full_matrix_model: incommensurable block weights");
}

Matrix flatten_with_counts(const Operator& x, const std::vector<int>& counts, int amplify) {
  int dim = 0;
  for (std::size_t b = 0; b < x.block_count(); ++b)
    dim += x.algebra().dim(b) * counts[b] * amplify;
  Matrix out = Matrix::Zero(dim, dim);
  int at = 0;
  for (std::size_t b = 0; b < x.block_count(); ++b)
    for (int c = 0; c < counts[b] * amplify; ++c) {
      const int n = x.algebra().dim(b);
      out.block(at, at, n, n) = x.block(b);
      at += n;
    }
  return out;
}

}  // namespace

Matrix sample_haar_unitary(int n, Rng& gen) {
  const Matrix g = ginibre(n, n, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0 ? d / a : Complex(1.0, 0.0));
  }
  return q;
}

Matrix full_matrix_model(const Operator& x, int min_dim) {
  const std::vector<int> counts = replication_counts(x.algebra());
  int base = 0;
  for (std::size_t b = 0; b < x.block_count(); ++b)
    base += x.algebra().dim(b) * counts[b];
  const int amplify = std::max(1, (min_dim + base - 1) / base);
  return flatten_with_counts(x, counts, amplify);
}

Operator free_model_embed(const FreeFamily& family, int N, Rng& gen) {
  if (N < 1) throw std::invalid_argument("free_model_embed: N < 1");
  // Common dimension: lcm of the summands' base matrix dimensions, scaled up
  // to at least N, so every summand amplifies by an exact integer factor.
  std::vector<int> base_dims;
  long common = 1;
  for (const Operator& x : family.members()) {
    const Matrix m = full_matrix_model(x, 1);
    base_dims.push_back(static_cast<int>(m.rows()));
    common = std::lcm(common, static_cast<long>(m.rows()));
  }
  const long dim = common * std::max(1L, (N + common - 1) / common);
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Operator& x : family.members()) {
    const Matrix u = sample_haar_unitary(static_cast<int>(dim), gen);
    const Matrix embedded = full_matrix_model(x, static_cast<int>(dim));
    if (embedded.rows() != dim)
      throw std::runtime_error("free_model_embed: amplification mismatch");
    sum += u * embedded * u.adjoint();
  }
  return Operator::from_matrix(std::move(sum));
}

std::vector<StepFunction> model_mu_samples(const FreeFamily& family, const ModelConfig& cfg) {
  std::vector<StepFunction> out;
  out.reserve(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    Rng gen = make_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const Operator sample = free_model_embed(family, cfg.N, gen);
    // mu via the eigenvalues of sample^* sample: the blocks are large and the
    // downstream checks carry model slack.
    const Matrix& m = sample.block(0);
    const Matrix h = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::vector<Step> steps;
    const double w = 1.0 / static_cast<double>(m.rows());
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      const double v = std::sqrt(std::max(es.eigenvalues()(i), 0.0));
      if (v > 0.0) steps.push_back({v, w});
    }
    out.push_back(StepFunction::from_unsorted(std::move(steps)));
  }
  return out;
}

namespace {
ModelNorm summarize(const std::vector<double>& values) {
  ModelNorm out;
  out.values = values;
  if (values.empty()) return out;
  double lo = values[0], hi = values[0], acc = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    acc += v;
  }
  out.mean = acc / values.size();
  out.spread = hi - lo;
  return out;
}
}  // namespace

ModelNorm model_symmetric_norm(const FreeFamily& family, const SymmetricSpace& space,
                               const ModelConfig& cfg) {
  std::vector<double> values;
  for (const StepFunction& mu : model_mu_samples(family, cfg))
    values.push_back(space.norm(mu));
  return summarize(values);
}

ModelNorm model_symmetric_norm(const Operator& x, const SymmetricSpace& space,
                               const ModelConfig& cfg) {
  const double v = operator_norm(space, x);
  return summarize(std::vector<double>(std::max(cfg.trials, 1), v));
}

}  // namespace freenorm
