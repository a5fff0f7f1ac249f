#include "freenorm/js.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "freenorm/free_family.hpp"

namespace freenorm {

namespace {

// Largest pointwise gap between two rearrangements, sampled at midpoints of
// the union of their breakpoints.
double sup_difference(const StepFunction& a, const StepFunction& b) {
  std::vector<double> grid = a.breakpoints();
  const std::vector<double> more = b.breakpoints();
  grid.insert(grid.end(), more.begin(), more.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double worst = 0.0, prev = 0.0;
  for (double s : grid) {
    if (s > prev + 1e-15) {
      const double mid = 0.5 * (prev + s);
      worst = std::max(worst, std::abs(a.value_at(mid) - b.value_at(mid)));
    }
    prev = s;
  }
  return worst;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

SymmetricDiagonalFamily::SymmetricDiagonalFamily(std::vector<std::vector<double>> diagonals)
    : diagonals_(std::move(diagonals)) {
  if (diagonals_.empty()) throw std::invalid_argument("family needs at least one summand");
  for (const std::vector<double>& diag : diagonals_) {
    if (diag.empty()) throw std::invalid_argument("summands must be non-trivial");
    // Pair every index with one carrying the opposite value; zeros pair
    // with themselves.
    std::vector<int> partner(diag.size(), -1);
    std::map<double, std::vector<int>> by_value;
    for (int j = 0; j < static_cast<int>(diag.size()); ++j) {
      if (diag[j] == 0.0) partner[j] = j;
      else by_value[diag[j]].push_back(j);
    }
    for (const auto& [value, indices] : by_value) {
      if (value <= 0.0) continue;
      const auto negatives = by_value.find(-value);
      if (negatives == by_value.end() || negatives->second.size() != indices.size())
        throw std::invalid_argument("spectrum is not closed under negation");
      for (std::size_t r = 0; r < indices.size(); ++r) {
        partner[indices[r]] = negatives->second[r];
        partner[negatives->second[r]] = indices[r];
      }
    }
    for (int p : partner)
      if (p < 0) throw std::invalid_argument("spectrum is not closed under negation");
    partner_.push_back(std::move(partner));
  }
  for (const std::vector<double>& diag : diagonals_) {
    Matrix m = Matrix::Zero(diag.size(), diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) m(j, j) = diag[j];
    operators_.push_back(Operator::from_matrix(std::move(m)));
  }
}

StepFunction SymmetricDiagonalFamily::embedding_mu() const {
  std::vector<Step> steps;
  for (const std::vector<double>& diag : diagonals_) {
    const double width = 1.0 / static_cast<double>(diag.size());
    for (double v : diag) steps.push_back({std::abs(v), width});
  }
  return StepFunction::from_unsorted(std::move(steps));
}

JsDecomposition js_decomposition(const SymmetricDiagonalFamily& f) {
  JsDecomposition out;
  const StepFunction mu = f.embedding_mu();
  const double t = mu.value_at(1.0);
  out.t = t;

  const std::vector<std::vector<double>>& diags = f.diagonals();
  out.q.resize(diags.size());
  double selected = 0.0;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    out.q[i].assign(diags[i].size(), 0.0);
    const double width = 1.0 / static_cast<double>(diags[i].size());
    for (std::size_t j = 0; j < diags[i].size(); ++j)
      if (std::abs(diags[i][j]) > t) {
        out.q[i][j] = 1.0;
        selected += width;
      }
  }

  // Fill the remaining mass with tied pairs, lower summand then lower index.
  double remaining = 1.0 - selected;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    const double width = 1.0 / static_cast<double>(diags[i].size());
    for (std::size_t j = 0; j < diags[i].size(); ++j) {
      const int p = f.partners()[i][j];
      if (p < static_cast<int>(j)) continue;
      if (out.q[i][j] > 0.5) continue;
      if (std::abs(diags[i][j]) != t) continue;
      const double chunk = (p == static_cast<int>(j) ? 1.0 : 2.0) * width;
      if (chunk <= remaining + 1e-12) {
        out.q[i][j] = 1.0;
        out.q[i][p] = 1.0;
        remaining -= chunk;
      }
    }
  }
  if (std::abs(remaining) > 1e-9) {
    std::ostringstream msg;
    msg << "cannot cut the spectral mass at one with an even selection: reachable "
        << (1.0 - remaining) << ", residual " << remaining;
    throw std::invalid_argument(msg.str());
  }

  double reconstruction = 0.0, u_sup = 0.0, disjoint = 0.0, v_mass = 0.0;
  std::vector<Step> head_steps;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    const int n = static_cast<int>(diags[i].size());
    const double width = 1.0 / n;
    Matrix mv = Matrix::Zero(n, n), mw = Matrix::Zero(n, n), mg = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      const double lambda = diags[i][j];
      const bool sel = out.q[i][j] > 0.5;
      const double vj = sel ? sign_of(lambda) : 0.0;
      const double wj = (!sel && t > 0.0) ? lambda / t : 0.0;
      const double gj = sel ? std::max(std::abs(lambda) - t, 0.0) : 0.0;
      mv(j, j) = vj;
      mw(j, j) = wj;
      mg(j, j) = gj;
      reconstruction = std::max(reconstruction, std::abs(lambda - (t * (vj + wj) + vj * gj)));
      u_sup = std::max(u_sup, std::abs(vj + wj));
      disjoint = std::max(disjoint, std::abs(vj * wj));
      if (vj != 0.0) v_mass += width;
      if (sel) head_steps.push_back({std::abs(lambda), width});
    }
    const AlgebraPtr& algebra = f.operators()[i].algebra_ptr();
    out.v.push_back(Operator(algebra, {mv}));
    out.w.push_back(Operator(algebra, {mw}));
    out.u.push_back(Operator(algebra, {mv + mw}));
    out.gamma.push_back(Operator(algebra, {mg}));
  }

  out.diagnostics["reconstruction"] = reconstruction;
  out.diagnostics["cut"] = std::abs(remaining);
  out.diagnostics["head_match"] =
      sup_difference(StepFunction::from_unsorted(std::move(head_steps)), mu.head(1.0));
  out.diagnostics["u_sup"] = u_sup;
  out.diagnostics["disjoint"] = disjoint;
  out.diagnostics["v_support_mass"] = v_mass;
  return out;
}

std::vector<ReportRow> verify_js(const SymmetricDiagonalFamily& f,
                                 const SymmetricSpace& base, const JsOptions& options,
                                 const std::string& instance_id) {
  const StepFunction unit({{1.0, 1.0}});
  if (std::abs(base.norm(unit) - 1.0) > 1e-9)
    throw std::invalid_argument("base space must normalize the unit interval");

  std::vector<ReportRow> rows;
  const std::uint64_t seed = options.model.seed;
  const double z = SymmetricSpace::ze2(base).norm(f.embedding_mu());
  const FreeFamily family = FreeFamily::over_scalars(f.operators());
  const ModelNorm model = model_symmetric_norm(family, base, options.model);
  rows.push_back(make_bound_row("js", instance_id, seed, "sum_le_embedding", model.mean, z,
                                3.0, options.slack));
  rows.push_back(make_bound_row("js", instance_id, seed, "embedding_le_sum", z, model.mean,
                                3.0, options.slack));

  const JsDecomposition dec = js_decomposition(f);
  rows.push_back(make_residual_row("js", instance_id, seed, "reconstruction",
                                   dec.diagnostics.at("reconstruction"), 1e-9));
  rows.push_back(make_residual_row("js", instance_id, seed, "cut", dec.diagnostics.at("cut"),
                                   1e-9));
  rows.push_back(make_residual_row("js", instance_id, seed, "head_match",
                                   dec.diagnostics.at("head_match"), 1e-9));
  rows.push_back(make_residual_row("js", instance_id, seed, "u_contraction",
                                   std::max(dec.diagnostics.at("u_sup") - 1.0, 0.0), 1e-9));
  rows.push_back(make_residual_row("js", instance_id, seed, "disjoint",
                                   dec.diagnostics.at("disjoint"), 1e-12));

  if (dec.t > 0.0) {
    // The head contractions are centered free contractions, so their model
    // norm obeys the two-times-Hilbert-plus-one bound.
    const FreeFamily heads = FreeFamily::over_scalars(dec.u);
    const ModelNorm head_model =
        model_symmetric_norm(heads, SymmetricSpace::linf(), options.model);
    double l2 = 0.0;
    for (const Operator& u : dec.u) l2 += u.l2_norm() * u.l2_norm();
    rows.push_back(make_bound_row("js", instance_id, seed, "head_sup_le_two_l2_plus_one",
                                  head_model.mean, 2.0 * std::sqrt(l2) + 1.0, 1.0,
                                  options.slack));
  }
  return rows;
}

}  // namespace freenorm
