#pragma once

#include <cstdint>
#include <random>

#include "freenorm/algebra.hpp"

namespace freenorm {

using Rng = std::mt19937_64;

/// Fixed 64-bit splitting of a master seed into independent per-trial streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Matrix with iid standard complex Gaussian entries.
Matrix ginibre(int rows, int cols, Rng& gen);

/// Hermitian matrix with GUE normalization (eigenvalue spread O(sqrt(n))).
Matrix gue(int n, Rng& gen);

/// Centered operator on a single mass-1 block: x - tau(x) 1.
Operator random_centered(int dim, bool hermitian, Rng& gen);

}  // namespace freenorm
