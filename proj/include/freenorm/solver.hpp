#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "freenorm/algebra.hpp"

namespace freenorm {

/// Continuation / gradient-descent parameters shared by the convex
/// decomposition solvers.
struct SolverConfig {
  int max_iter = 10000;      // per continuation stage
  double eps_start = 1e-2;   // first smoothing level
  double eps_end = 1e-8;     // last smoothing level (factor-10 continuation)
  double tol_rel = 1e-7;     // relative objective-change stop
  std::uint64_t seed = 0;    // reserved for randomized starts
};

struct SolveStats {
  bool converged = false;  // final stage met the relative-change criterion
  int iterations = 0;      // total accepted steps over all stages
  double objective = 0.0;  // smoothed objective at the last iterate
};

using VarPack = std::vector<Matrix>;

/// Projected gradient descent with Armijo backtracking over a smoothing
/// continuation eps_start -> eps_end.  `value` and `gradient` evaluate the
/// smoothed objective at a given eps; `project` maps an iterate back onto the
/// feasible affine subspace (may be empty).
SolveStats minimize_smoothed(VarPack& vars,
                             const std::function<double(double, const VarPack&)>& value,
                             const std::function<VarPack(double, const VarPack&)>& gradient,
                             const std::function<void(VarPack&)>& project,
                             const SolverConfig& cfg);

}  // namespace freenorm
