#include "freenorm/random.hpp"

namespace freenorm {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined state.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix_seed(seed, stream));
}

Matrix ginibre(int rows, int cols, Rng& gen) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
  return m;
}

Matrix gue(int n, Rng& gen) {
  const Matrix g = ginibre(n, n, gen);
  return (g + g.adjoint()) / 2.0;
}

Operator random_centered(int dim, bool hermitian, Rng& gen) {
  Matrix m = hermitian ? gue(dim, gen) : ginibre(dim, dim, gen);
  m /= std::sqrt(static_cast<double>(dim));
  const Complex t = m.trace() / static_cast<double>(dim);
  m -= t * Matrix::Identity(dim, dim);
  return Operator::from_matrix(std::move(m));
}

}  // namespace freenorm
