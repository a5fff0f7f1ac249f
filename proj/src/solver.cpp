#include "freenorm/solver.hpp"

#include <cmath>

namespace freenorm {

namespace {
double pack_norm_sq(const VarPack& g) {
  double acc = 0.0;
  for (const Matrix& m : g) acc += m.squaredNorm();
  return acc;
}
}  // namespace

SolveStats minimize_smoothed(VarPack& vars,
                             const std::function<double(double, const VarPack&)>& value,
                             const std::function<VarPack(double, const VarPack&)>& gradient,
                             const std::function<void(VarPack&)>& project,
                             const SolverConfig& cfg) {
  SolveStats stats;
  if (project) project(vars);

  std::vector<double> stages;
  for (double eps = cfg.eps_start; eps >= cfg.eps_end * (1.0 - 1e-12); eps /= 10.0)
    stages.push_back(eps);
  if (stages.empty()) stages.push_back(cfg.eps_end);

  double step = 1.0;
  for (std::size_t si = 0; si < stages.size(); ++si) {
    const double eps = stages[si];
    double f = value(eps, vars);
    bool stage_converged = false;
    int calm = 0;
    for (int it = 0; it < cfg.max_iter; ++it) {
      const VarPack g = gradient(eps, vars);
      const double gnorm2 = pack_norm_sq(g);
      if (gnorm2 <= 1e-30) {
        stage_converged = true;
        break;
      }
      bool accepted = false;
      double fnew = f;
      VarPack trial;
      for (int bt = 0; bt < 60; ++bt) {
        trial = vars;
        for (std::size_t k = 0; k < trial.size(); ++k) trial[k] -= step * g[k];
        if (project) project(trial);
        fnew = value(eps, trial);
        if (fnew <= f - 1e-4 * step * gnorm2) {
          accepted = true;
          break;
        }
        step *= 0.5;
        if (step < 1e-18) break;
      }
      if (!accepted) {
        // Numerically stationary at this smoothing level.
        stage_converged = true;
        break;
      }
      vars = std::move(trial);
      ++stats.iterations;
      step = std::min(step * 1.3, 1e6);
      if (std::abs(f - fnew) <= cfg.tol_rel * (1.0 + std::abs(fnew))) {
        if (++calm >= 3) {
          stage_converged = true;
          f = fnew;
          break;
        }
      } else {
        calm = 0;
      }
      f = fnew;
    }
    stats.objective = f;
    if (si + 1 == stages.size()) stats.converged = stage_converged;
  }
  return stats;
}

}  // namespace freenorm
