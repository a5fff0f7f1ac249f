#pragma once

#include <cstdint>
#include <vector>

#include "freenorm/free_family.hpp"
#include "freenorm/random.hpp"
#include "freenorm/spaces.hpp"

namespace freenorm {

/// Haar-unitary substitution model parameters.
struct ModelConfig {
  int N = 256;                  // per-summand amplification factor
  std::uint64_t seed = 0;       // master seed; trial k uses mix_seed(seed, k)
  int trials = 20;
  double slack = 0.05;          // multiplicative tolerance for model checks
};

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phase fix.
Matrix sample_haar_unitary(int n, Rng& gen);

/// One sample of sum_i U_i (x_i tensor 1) U_i^* on a common block:
/// each summand is amplified so that all per-summand moments are preserved
/// exactly, then conjugated by an independent Haar unitary.
Operator free_model_embed(const FreeFamily& family, int N, Rng& gen);

/// Full matrix picture of an operator: blocks replicated in proportion to
/// their per-eigenvalue weights, so the normalized matrix trace reproduces
/// tau.  Requires commensurable weights.
Matrix full_matrix_model(const Operator& x, int min_dim = 1);

struct ModelNorm {
  double mean = 0.0;
  double spread = 0.0;  // max - min across trials
  std::vector<double> values;
};

/// Per-trial rearrangements mu(sample) of the modeled free sum.
std::vector<StepFunction> model_mu_samples(const FreeFamily& family, const ModelConfig& cfg);

ModelNorm model_symmetric_norm(const FreeFamily& family, const SymmetricSpace& space,
                               const ModelConfig& cfg);

/// Degenerate model of a fixed operator: every trial evaluates the same mu.
ModelNorm model_symmetric_norm(const Operator& x, const SymmetricSpace& space,
                               const ModelConfig& cfg);

}  // namespace freenorm
