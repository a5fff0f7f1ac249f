#include "freenorm/free_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace freenorm {

namespace {

/// Subgradient of the space norm with respect to the step values; `v` must be
/// sorted non-increasing with weights `w`.
std::vector<double> space_subgradient(const SymmetricSpace& space, const std::vector<double>& v,
                                      const std::vector<double>& w) {
  const std::size_t n = v.size();
  std::vector<double> c(n, 0.0);
  if (n == 0) return c;
  switch (space.kind()) {
    case SymmetricSpace::Kind::Lp: {
      const double p = space.param();
      if (std::isinf(p)) {
        const double top = v[0];
        std::size_t ties = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (v[j] >= top * (1.0 - 1e-12)) ++ties;
        for (std::size_t j = 0; j < n; ++j)
          if (v[j] >= top * (1.0 - 1e-12)) c[j] = 1.0 / static_cast<double>(ties);
        return c;
      }
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += w[j] * std::pow(v[j], p);
      const double phi = std::pow(acc, 1.0 / p);
      if (phi <= 0.0) return c;
      for (std::size_t j = 0; j < n; ++j)
        c[j] = w[j] * std::pow(v[j], p - 1.0) * std::pow(phi, 1.0 - p);
      return c;
    }
    case SymmetricSpace::Kind::L1PlusTLinf: {
      double remaining = space.param();
      for (std::size_t j = 0; j < n && remaining > 0.0; ++j) {
        c[j] = std::min(remaining, w[j]);
        remaining -= c[j];
      }
      return c;
    }
    case SymmetricSpace::Kind::LinfCapSL1: {
      const double s = space.param();
      double l1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) l1 += w[j] * v[j];
      if (v[0] >= s * l1) {
        const double top = v[0];
        std::size_t ties = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (v[j] >= top * (1.0 - 1e-12)) ++ties;
        for (std::size_t j = 0; j < n; ++j)
          if (v[j] >= top * (1.0 - 1e-12)) c[j] = 1.0 / static_cast<double>(ties);
      } else {
        for (std::size_t j = 0; j < n; ++j) c[j] = s * w[j];
      }
      return c;
    }
    case SymmetricSpace::Kind::ZE2: {
      // Central finite differences through the generic evaluator.
      auto eval = [&](const std::vector<double>& vals) {
        std::vector<Step> steps;
        for (std::size_t j = 0; j < vals.size(); ++j)
          steps.push_back({std::max(vals[j], 0.0), w[j]});
        return space.norm(StepFunction::from_unsorted(std::move(steps)));
      };
      std::vector<double> probe = v;
      for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(v[j]));
        probe[j] = v[j] + h;
        const double up = eval(probe);
        probe[j] = std::max(v[j] - h, 0.0);
        const double dn = eval(probe);
        probe[j] = v[j];
        c[j] = (up - dn) / (v[j] + h - std::max(v[j] - h, 0.0));
      }
      return c;
    }
  }
  return c;
}

struct ValueRef {
  double value = 0.0;
  double weight = 0.0;
  std::size_t group = 0;  // which eigensystem the value came from
  int index = 0;          // eigenvalue index inside the group
};

/// Evaluates the space norm on a set of eigenvalue systems and distributes
/// the subgradient back to (group, index) slots.
struct SpectralTerm {
  double value = 0.0;
  std::vector<std::vector<double>> coeff;  // per group, per eigenvalue: dPhi/ds_j
};

SpectralTerm eval_spectral_term(const SymmetricSpace& space,
                                const std::vector<std::vector<double>>& smoothed_values,
                                const std::vector<std::vector<double>>& weights) {
  std::vector<ValueRef> refs;
  for (std::size_t g = 0; g < smoothed_values.size(); ++g)
    for (std::size_t i = 0; i < smoothed_values[g].size(); ++i)
      refs.push_back({smoothed_values[g][i], weights[g][i], g, static_cast<int>(i)});
  std::stable_sort(refs.begin(), refs.end(),
                   [](const ValueRef& a, const ValueRef& b) { return a.value > b.value; });
  std::vector<double> v(refs.size()), w(refs.size());
  for (std::size_t j = 0; j < refs.size(); ++j) {
    v[j] = refs[j].value;
    w[j] = refs[j].weight;
  }
  SpectralTerm out;
  {
    std::vector<Step> steps;
    for (std::size_t j = 0; j < v.size(); ++j) steps.push_back({v[j], w[j]});
    out.value = space.norm(StepFunction(steps));
  }
  const std::vector<double> c = space_subgradient(space, v, w);
  out.coeff.resize(smoothed_values.size());
  for (std::size_t g = 0; g < smoothed_values.size(); ++g)
    out.coeff[g].assign(smoothed_values[g].size(), 0.0);
  for (std::size_t j = 0; j < refs.size(); ++j)
    out.coeff[refs[j].group][refs[j].index] = c[j];
  return out;
}

struct EigSystem {
  Eigen::VectorXd values;  // eigenvalues of the psd operand, ascending
  Matrix vectors;
};

EigSystem eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Smoothed three-term objective and gradient for the decomposition solver.
class SigmaObjective {
public:
  SigmaObjective(const FreeFamily& family, const SymmetricSpace& space)
      : family_(family), space_(space) {
    for (const Operator& x : family.members()) layout_.push_back(x.algebra_ptr());
  }

  VarPack initial_vars() const {
    VarPack pack;
    append_zero(pack);
    append_zero(pack);
    return pack;
  }

  void unpack(const VarPack& pack, std::vector<Operator>& a, std::vector<Operator>& b) const {
    std::size_t at = 0;
    a = read_family(pack, at);
    b = read_family(pack, at);
  }

  VarPack pack_ops(const std::vector<Operator>& a, const std::vector<Operator>& b) const {
    VarPack pack;
    for (const Operator& x : a)
      for (std::size_t bl = 0; bl < x.block_count(); ++bl) pack.push_back(x.block(bl));
    for (const Operator& x : b)
      for (std::size_t bl = 0; bl < x.block_count(); ++bl) pack.push_back(x.block(bl));
    return pack;
  }

  std::vector<Operator> d_parts(const std::vector<Operator>& a,
                                const std::vector<Operator>& b) const {
    std::vector<Operator> d;
    for (std::size_t i = 0; i < family_.size(); ++i)
      d.push_back(family_.x(i) - a[i] - b[i]);
    return d;
  }

  double value(double eps, const VarPack& pack) const {
    std::vector<Operator> a, b;
    unpack(pack, a, b);
    const std::vector<Operator> d = d_parts(a, b);
    return conditioned_term(a, eps, Side::Column).value +
           conditioned_term(b, eps, Side::Row).value + diagonal_term(d, eps).value;
  }

  VarPack gradient(double eps, const VarPack& pack) const {
    std::vector<Operator> a, b;
    unpack(pack, a, b);
    const std::vector<Operator> d = d_parts(a, b);

    std::vector<Operator> ga = conditioned_gradient(a, eps, Side::Column);
    std::vector<Operator> gb = conditioned_gradient(b, eps, Side::Row);
    const std::vector<Operator> gd = diagonal_gradient(d, eps);
    for (std::size_t i = 0; i < family_.size(); ++i) {
      ga[i] -= gd[i];
      gb[i] -= gd[i];
    }
    return pack_ops(ga, gb);
  }

  void project(VarPack& pack) const {
    std::vector<Operator> a, b;
    unpack(pack, a, b);
    for (Operator& x : a) x -= family_.base().apply(x);
    for (Operator& x : b) x -= family_.base().apply(x);
    pack = pack_ops(a, b);
  }

private:
  void append_zero(VarPack& pack) const {
    for (const AlgebraPtr& alg : layout_) {
      const Operator z = Operator::zero(alg);
      for (std::size_t bl = 0; bl < z.block_count(); ++bl) pack.push_back(z.block(bl));
    }
  }

  std::vector<Operator> read_family(const VarPack& pack, std::size_t& at) const {
    std::vector<Operator> out;
    for (const AlgebraPtr& alg : layout_) {
      std::vector<Matrix> blocks;
      for (std::size_t bl = 0; bl < alg->block_count(); ++bl) blocks.push_back(pack[at++]);
      out.emplace_back(alg, std::move(blocks));
    }
    return out;
  }

  struct CondEval {
    double value = 0.0;
    // scalar base: d(value)/d(m) where m = sum of weighted Frobenius squares
    double scalar_factor = 0.0;
    // matrix base: Hermitian gradient of value w.r.t. M on the common algebra
    Operator matrix_grad = Operator::scalar(Complex(0.0, 0.0));
    bool scalar = true;
  };

  CondEval conditioned_term(const std::vector<Operator>& ys, double eps, Side side) const {
    CondEval out;
    if (family_.scalar_base()) {
      double m = 0.0;
      for (const Operator& y : ys)
        for (std::size_t bl = 0; bl < y.block_count(); ++bl)
          m += y.algebra().weight(bl) * y.block(bl).squaredNorm();
      const double s = std::sqrt(m + eps);
      const SpectralTerm term = eval_spectral_term(space_, {{s}}, {{1.0}});
      out.value = term.value;
      out.scalar_factor = term.coeff[0][0] / (2.0 * s);
      return out;
    }
    out.scalar = false;
    const AlgebraPtr alg = ys[0].algebra_ptr();
    Operator sum = Operator::zero(alg);
    for (const Operator& y : ys)
      sum += side == Side::Row ? y * y.adjoint() : y.adjoint() * y;
    const Operator m = family_.base().apply(sum);
    std::vector<EigSystem> systems;
    std::vector<std::vector<double>> values, weights;
    for (std::size_t bl = 0; bl < m.block_count(); ++bl) {
      systems.push_back(eigh(m.block(bl)));
      std::vector<double> v, w;
      for (int j = 0; j < systems.back().values.size(); ++j) {
        v.push_back(std::sqrt(std::max(systems.back().values(j), 0.0) + eps));
        w.push_back(m.algebra().weight(bl));
      }
      values.push_back(std::move(v));
      weights.push_back(std::move(w));
    }
    const SpectralTerm term = eval_spectral_term(space_, values, weights);
    out.value = term.value;
    std::vector<Matrix> gblocks;
    for (std::size_t bl = 0; bl < m.block_count(); ++bl) {
      const EigSystem& es = systems[bl];
      Eigen::VectorXd diag(es.values.size());
      for (int j = 0; j < es.values.size(); ++j)
        diag(j) = term.coeff[bl][j] / (2.0 * values[bl][j]);
      gblocks.push_back(es.vectors * diag.asDiagonal().toDenseMatrix().cast<Complex>() *
                        es.vectors.adjoint());
    }
    out.matrix_grad = Operator(alg, std::move(gblocks));
    return out;
  }

  std::vector<Operator> conditioned_gradient(const std::vector<Operator>& ys, double eps,
                                             Side side) const {
    if (family_.scalar_base()) {
      const CondEval ev = conditioned_term(ys, eps, side);
      std::vector<Operator> grads;
      for (const Operator& y : ys) {
        std::vector<Matrix> blocks;
        for (std::size_t bl = 0; bl < y.block_count(); ++bl)
          blocks.push_back(2.0 * ev.scalar_factor * y.algebra().weight(bl) * y.block(bl));
        grads.emplace_back(y.algebra_ptr(), std::move(blocks));
      }
      return grads;
    }
    // Row norms are column norms of adjoints.
    if (side == Side::Row) {
      std::vector<Operator> adj;
      for (const Operator& y : ys) adj.push_back(y.adjoint());
      std::vector<Operator> g = conditioned_gradient(adj, eps, Side::Column);
      for (Operator& x : g) x = x.adjoint();
      return g;
    }
    const CondEval ev = conditioned_term(ys, eps, Side::Column);
    const Operator w = family_.base().apply_adjoint(ev.matrix_grad);
    std::vector<Operator> grads;
    for (const Operator& y : ys) grads.push_back(2.0 * (y * w));
    return grads;
  }

  SpectralTerm diagonal_data(const std::vector<Operator>& d, double eps,
                             std::vector<EigSystem>* systems) const {
    std::vector<std::vector<double>> values, weights;
    for (const Operator& di : d)
      for (std::size_t bl = 0; bl < di.block_count(); ++bl) {
        const Matrix h = di.block(bl).adjoint() * di.block(bl);
        EigSystem es = eigh(h);
        std::vector<double> v, w;
        for (int j = 0; j < es.values.size(); ++j) {
          v.push_back(std::sqrt(std::max(es.values(j), 0.0) + eps));
          w.push_back(di.algebra().weight(bl));
        }
        if (systems) systems->push_back(std::move(es));
        values.push_back(std::move(v));
        weights.push_back(std::move(w));
      }
    return eval_spectral_term(space_, values, weights);
  }

  SpectralTerm diagonal_term(const std::vector<Operator>& d, double eps) const {
    return diagonal_data(d, eps, nullptr);
  }

  std::vector<Operator> diagonal_gradient(const std::vector<Operator>& d, double eps) const {
    std::vector<EigSystem> systems;
    const SpectralTerm term = diagonal_data(d, eps, &systems);
    std::vector<Operator> grads;
    std::size_t g = 0;
    for (const Operator& di : d) {
      std::vector<Matrix> blocks;
      for (std::size_t bl = 0; bl < di.block_count(); ++bl, ++g) {
        const EigSystem& es = systems[g];
        Eigen::VectorXd diag(es.values.size());
        for (int j = 0; j < es.values.size(); ++j) {
          const double s = std::sqrt(std::max(es.values(j), 0.0) + eps);
          diag(j) = term.coeff[g][j] / (2.0 * s);
        }
        const Matrix gh = es.vectors * diag.asDiagonal().toDenseMatrix().cast<Complex>() *
                          es.vectors.adjoint();
        blocks.push_back(2.0 * di.block(bl) * gh);
      }
      grads.emplace_back(di.algebra_ptr(), std::move(blocks));
    }
    return grads;
  }

  const FreeFamily& family_;
  const SymmetricSpace& space_;
  std::vector<AlgebraPtr> layout_;
};

std::vector<Operator> zero_family(const FreeFamily& family) {
  std::vector<Operator> out;
  for (const Operator& x : family.members()) out.push_back(Operator::zero(x.algebra_ptr()));
  return out;
}

}  // namespace

CapNorm cap_norm(const FreeFamily& family, const SymmetricSpace& space) {
  CapNorm out;
  out.column = operator_norm(space, family.conditioned_operand(family.members(), Side::Column));
  out.row = operator_norm(space, family.conditioned_operand(family.members(), Side::Row));
  out.diagonal = space.norm(diagonal_mu(family.members()));
  out.value = std::max({out.column, out.row, out.diagonal});
  return out;
}

double decomposition_objective(const FreeFamily& family, const SymmetricSpace& space,
                               const Decomposition& dec) {
  const double col = operator_norm(space, family.conditioned_operand(dec.a, Side::Column));
  const double row = operator_norm(space, family.conditioned_operand(dec.b, Side::Row));
  const double diag = space.norm(diagonal_mu(dec.d));
  return col + row + diag;
}

SigmaResult sigma_norm(const FreeFamily& family, const SymmetricSpace& space,
                       const SolverConfig& cfg) {
  if (!family.centered()) throw std::invalid_argument("sigma_norm: family must be centered");
  SigmaObjective objective(family, space);
  VarPack vars = objective.initial_vars();
  const SolveStats stats = minimize_smoothed(
      vars, [&](double eps, const VarPack& v) { return objective.value(eps, v); },
      [&](double eps, const VarPack& v) { return objective.gradient(eps, v); },
      [&](VarPack& v) { objective.project(v); }, cfg);

  Decomposition dec;
  objective.unpack(vars, dec.a, dec.b);
  dec.d = objective.d_parts(dec.a, dec.b);

  // Corner candidates: tiny smoothing dust on an inactive part can otherwise
  // dominate the exact objective.
  std::vector<Decomposition> candidates;
  candidates.push_back(dec);
  candidates.push_back({zero_family(family), dec.b, objective.d_parts(zero_family(family), dec.b)});
  candidates.push_back({dec.a, zero_family(family), objective.d_parts(dec.a, zero_family(family))});
  candidates.push_back({zero_family(family), zero_family(family), family.members()});
  candidates.push_back({family.members(), zero_family(family), zero_family(family)});
  candidates.push_back({zero_family(family), family.members(), zero_family(family)});

  SigmaResult result;
  result.converged = stats.converged;
  result.iterations = stats.iterations;
  double best = std::numeric_limits<double>::infinity();
  for (const Decomposition& cand : candidates) {
    const double v = decomposition_objective(family, space, cand);
    if (v < best - 1e-15) {
      best = v;
      result.witness = cand;
    }
  }
  result.value = best;
  return result;
}

namespace {
AlgebraPtr doubled_algebra(const TracialAlgebra& alg) {
  std::vector<AlgebraBlock> blocks;
  for (int round = 0; round < 2; ++round)
    for (const AlgebraBlock& b : alg.blocks()) blocks.push_back({b.dim, b.mass / 2.0});
  return make_algebra(std::move(blocks));
}
}  // namespace

Operator pi_embed(const Operator& x) {
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < x.block_count(); ++b) blocks.push_back(x.block(b));
  for (std::size_t b = 0; b < x.block_count(); ++b) blocks.push_back(-x.block(b));
  return Operator(doubled_algebra(x.algebra()), std::move(blocks));
}

Operator swap_halves(const Operator& x) {
  const std::size_t nb = x.block_count();
  if (nb % 2 != 0) throw std::invalid_argument("swap_halves: odd block count");
  std::vector<Matrix> blocks(nb);
  for (std::size_t b = 0; b < nb / 2; ++b) {
    blocks[b] = x.block(b + nb / 2);
    blocks[b + nb / 2] = x.block(b);
  }
  return Operator(x.algebra_ptr(), std::move(blocks));
}

Operator half_component(const Operator& x, const AlgebraPtr& shape, int which) {
  const std::size_t half = x.block_count() / 2;
  if (shape->block_count() != half)
    throw std::invalid_argument("half_component: shape mismatch");
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < half; ++b) blocks.push_back(x.block(which * half + b));
  return Operator(shape, std::move(blocks));
}

FreeFamily symmetrize(const FreeFamily& family) {
  std::vector<Operator> xs;
  for (const Operator& x : family.members()) xs.push_back(pi_embed(x));
  ConditionalExpectation base =
      family.scalar_base() ? ConditionalExpectation::scalar()
                           : ConditionalExpectation::doubled(family.base());
  return FreeFamily(std::move(xs), std::move(base), true);
}

namespace {

/// Least-squares merge of the polar data: minimizes
/// ||u a - p||^2 + ||b u - q||^2 + ||u g - r||^2 blockwise for scalars
/// a = alpha, b = beta and psd g; the normal equation is the Sylvester
/// identity beta^2 u + u (alpha^2 + g^2) = beta q + p alpha + r g.
Operator merge_contraction(double alpha, double beta, const Operator& p, const Operator& q,
                           const Operator& r, const Operator& g) {
  std::vector<Matrix> blocks;
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    const Matrix rhs = beta * q.block(b) + alpha * p.block(b) + r.block(b) * g.block(b);
    const EigSystem es = eigh(alpha * alpha * Matrix::Identity(g.block(b).rows(), g.block(b).cols()) +
                              g.block(b) * g.block(b));
    const Matrix c = rhs * es.vectors;
    double scale = beta * beta;
    for (int j = 0; j < es.values.size(); ++j)
      scale = std::max(scale, beta * beta + es.values(j));
    const double cutoff = 1e-13 * std::max(scale, 1e-300);
    Matrix scaled = c;
    for (int j = 0; j < es.values.size(); ++j) {
      const double denom = beta * beta + es.values(j);
      if (denom > cutoff)
        scaled.col(j) = c.col(j) / denom;
      else
        scaled.col(j).setZero();
    }
    blocks.push_back(scaled * es.vectors.adjoint());
  }
  return Operator(p.algebra_ptr(), std::move(blocks));
}

}  // namespace

AlgebraicDecomposition algebraic_decomposition(const FreeFamily& family,
                                               const SolverConfig& cfg) {
  if (!family.scalar_base())
    throw std::invalid_argument("algebraic_decomposition: requires a scalar amalgam");
  if (!family.centered())
    throw std::invalid_argument("algebraic_decomposition: family must be centered");

  const FreeFamily sym = symmetrize(family);
  const SymmetricSpace l1 = SymmetricSpace::lp(1.0);
  SigmaResult sres = sigma_norm(sym, l1, cfg);

  AlgebraicDecomposition out;
  out.converged = sres.converged;

  // Flip-antisymmetrization; by convexity it cannot increase the objective.
  const double before = decomposition_objective(sym, l1, sres.witness);
  Decomposition dec;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    dec.a.push_back(0.5 * (sres.witness.a[i] - swap_halves(sres.witness.a[i])));
    dec.b.push_back(0.5 * (sres.witness.b[i] - swap_halves(sres.witness.b[i])));
    dec.d.push_back(0.5 * (sres.witness.d[i] - swap_halves(sres.witness.d[i])));
  }
  const double after = decomposition_objective(sym, l1, dec);
  out.residuals["antisymmetrization_gain"] = after - before;
  out.l1_value = after;
  out.witness = dec;

  double m_col = 0.0, m_row = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    m_col += trace(dec.a[i].adjoint() * dec.a[i]).real();
    m_row += trace(dec.b[i] * dec.b[i].adjoint()).real();
  }
  out.alpha = std::sqrt(std::max(m_col, 0.0));
  out.beta = std::sqrt(std::max(m_row, 0.0));

  double recon = 0.0, commute = 0.0, rela = 0.0;
  double sup_u = 0.0, u_upper = 0.0;
  double support_lower = std::numeric_limits<double>::infinity();
  double usum_col = 0.0, usum_row = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const Operator gamma_t = sqrt_psd(dec.d[i].adjoint() * dec.d[i]);
    const Operator delta_t = sqrt_psd(dec.d[i] * dec.d[i].adjoint());
    const Operator u_t = merge_contraction(out.alpha, out.beta, dec.a[i], dec.b[i], dec.d[i],
                                           gamma_t);
    const AlgebraPtr shape = family.x(i).algebra_ptr();
    const Operator u1 = half_component(u_t, shape, 0);
    const Operator u2 = half_component(u_t, shape, 1);
    const Operator u = 0.5 * (u1 - u2);
    const Operator gamma =
        0.5 * (half_component(gamma_t, shape, 0) + half_component(gamma_t, shape, 1));
    const Operator delta =
        0.5 * (half_component(delta_t, shape, 0) + half_component(delta_t, shape, 1));

    const Operator recon_i = out.alpha * u + out.beta * u + u * gamma;
    recon = std::max(recon, (family.x(i) - recon_i).l2_norm());
    commute = std::max(commute, (u * gamma - delta * u).l2_norm());

    const Operator uu = u.adjoint() * u;
    u_upper = std::max(u_upper, uu.sup_norm());
    sup_u = std::max(sup_u, u.sup_norm());
    usum_col += trace(uu).real();
    usum_row += trace(u * u.adjoint()).real();

    const Operator supp = support_projection(gamma, 1e-10);
    if (supp.sup_norm() > 0.5) {
      support_lower = std::min(support_lower, restricted_min_eig(uu, supp));
      rela = std::max(rela, (supp * sqrt_psd(uu) - supp).l2_norm());
    }

    out.u.push_back(u);
    out.gamma.push_back(gamma);
    out.delta.push_back(delta);
  }
  out.residuals["reconstruction"] = recon;
  out.residuals["commutation"] = commute;
  out.residuals["column_contraction"] = std::sqrt(std::max(usum_col, 0.0));
  out.residuals["row_contraction"] = std::sqrt(std::max(usum_row, 0.0));
  out.residuals["sup_u"] = sup_u;
  out.residuals["u_upper"] = u_upper;
  out.residuals["support_lower"] =
      std::isinf(support_lower) ? 1.0 : support_lower;
  out.residuals["rela"] = rela;
  return out;
}

Decomposition truncate_decomposition(const FreeFamily& family, const Decomposition& dec,
                                     double M) {
  if (!(M > 0.0)) throw std::invalid_argument("truncate_decomposition: M <= 0");
  Decomposition out;
  if (family.scalar_base()) {
    const double col = family.conditioned_operand(dec.a, Side::Column).sup_norm();
    const double row = family.conditioned_operand(dec.b, Side::Row).sup_norm();
    const double e = col <= M ? 1.0 : 0.0;
    const double f = row <= M ? 1.0 : 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      out.a.push_back(f * e * dec.a[i] + (1.0 - e) * family.x(i));
      out.b.push_back(f * e * dec.b[i] + (1.0 - f) * e * family.x(i));
      out.d.push_back(f * e * dec.d[i]);
    }
    return out;
  }
  const Operator acol = family.conditioned_operand(dec.a, Side::Column);
  const Operator brow = family.conditioned_operand(dec.b, Side::Row);
  const Operator e =
      functional_calculus(acol, [M](double v) { return v <= M ? 1.0 : 0.0; });
  const Operator f =
      functional_calculus(brow, [M](double v) { return v <= M ? 1.0 : 0.0; });
  const Operator one = Operator::identity(acol.algebra_ptr());
  for (std::size_t i = 0; i < family.size(); ++i) {
    out.a.push_back(f * dec.a[i] * e + family.x(i) * (one - e));
    out.b.push_back(f * dec.b[i] * e + (one - f) * family.x(i) * e);
    out.d.push_back(f * dec.d[i] * e);
  }
  return out;
}

double scalar_norm(const SymmetricSpace& space, double c) {
  if (c < 0.0) throw std::invalid_argument("scalar_norm: negative value");
  if (c == 0.0) return 0.0;
  return space.norm(StepFunction({{c, 1.0}}));
}

std::vector<ReportRow> verify_free_sum_inequalities(const FreeFamily& family,
                                                    const VerifyOptions& options,
                                                    const std::string& instance_id) {
  std::vector<ReportRow> rows;
  const std::string exp = "free_sums";
  const std::uint64_t seed = options.model.seed;
  const double slack = options.slack;

  const std::vector<StepFunction> samples = model_mu_samples(family, options.model);
  auto model_mean = [&](const SymmetricSpace& space) {
    double acc = 0.0;
    for (const StepFunction& mu : samples) acc += space.norm(mu);
    return acc / static_cast<double>(samples.size());
  };

  const SymmetricSpace linf = SymmetricSpace::linf();
  const CapNorm cap_inf = cap_norm(family, linf);
  const double model_inf = model_mean(linf);
  rows.push_back(make_bound_row(exp, instance_id, seed, "sandwich_max_le_model", cap_inf.value,
                                model_inf, 1.0, slack));
  rows.push_back(make_bound_row(exp, instance_id, seed, "sandwich_model_le_sum", model_inf,
                                cap_inf.column + cap_inf.row + cap_inf.diagonal, 1.0, slack));

  AlgebraicDecomposition pipeline;
  bool have_pipeline = false;
  if (options.with_pipeline && family.scalar_base()) {
    pipeline = algebraic_decomposition(family, options.solver);
    have_pipeline = true;
  }

  for (const SymmetricSpace& space : options.spaces) {
    const std::string tag = "[" + space.descriptor() + "]";
    const double model_e = model_mean(space);
    const CapNorm cap_e = cap_norm(family, space);
    rows.push_back(make_bound_row(exp, instance_id, seed, "cap12_upper" + tag, model_e,
                                  cap_e.value, 12.0, slack));
    if (space.is_l2_linf_interpolation())
      rows.push_back(make_bound_row(exp, instance_id, seed, "cap2_lower" + tag, cap_e.value,
                                    model_e, 2.0, slack));
    if (options.with_sigma) {
      const SigmaResult sres = sigma_norm(family, space, options.solver);
      rows.push_back(make_bound_row(exp, instance_id, seed, "sigma16_lower" + tag, sres.value,
                                    model_e, 16.0, slack));
      if (space.is_l1_l2_interpolation())
        rows.push_back(make_bound_row(exp, instance_id, seed, "sigma2_upper" + tag, model_e,
                                      sres.value, 2.0, slack));
    }
    if (have_pipeline) {
      const double alpha_e = scalar_norm(space, pipeline.alpha);
      const double beta_e = scalar_norm(space, pipeline.beta);
      const double gamma_e = space.norm(diagonal_mu(pipeline.gamma));
      rows.push_back(make_residual_row(exp, instance_id, seed, "alpha_le_column" + tag,
                                       alpha_e - cap_e.column, 1e-5));
      rows.push_back(make_residual_row(exp, instance_id, seed, "beta_le_row" + tag,
                                       beta_e - cap_e.row, 1e-5));
      rows.push_back(make_residual_row(exp, instance_id, seed, "gamma_le_diagonal" + tag,
                                       gamma_e - cap_e.diagonal, 1e-5));
      rows.push_back(make_bound_row(exp, instance_id, seed, "split4_upper" + tag, model_e,
                                    alpha_e + beta_e + gamma_e, 4.0, slack));
      rows.push_back(make_bound_row(exp, instance_id, seed, "split4_lower_alpha" + tag,
                                    alpha_e, model_e, 4.0, slack));
      rows.push_back(make_bound_row(exp, instance_id, seed, "split4_lower_beta" + tag, beta_e,
                                    model_e, 4.0, slack));
      rows.push_back(make_bound_row(exp, instance_id, seed, "split4_lower_gamma" + tag,
                                    gamma_e, model_e, 4.0, slack));
    }
  }

  if (have_pipeline && options.with_truncation) {
    const FreeFamily sym = symmetrize(family);
    const SymmetricSpace l1 = SymmetricSpace::lp(1.0);
    const double M = model_inf * (1.0 + slack);
    const Decomposition trunc = truncate_decomposition(sym, pipeline.witness, M);
    const double col0 = operator_norm(l1, sym.conditioned_operand(pipeline.witness.a, Side::Column));
    const double row0 = operator_norm(l1, sym.conditioned_operand(pipeline.witness.b, Side::Row));
    const double diag0 = l1.norm(diagonal_mu(pipeline.witness.d));
    const double col1 = operator_norm(l1, sym.conditioned_operand(trunc.a, Side::Column));
    const double row1 = operator_norm(l1, sym.conditioned_operand(trunc.b, Side::Row));
    const double diag1 = l1.norm(diagonal_mu(trunc.d));
    rows.push_back(make_residual_row(exp, instance_id, seed, "trunc_col_descent", col1 - col0,
                                     1e-9));
    rows.push_back(make_residual_row(exp, instance_id, seed, "trunc_row_descent", row1 - row0,
                                     1e-9));
    rows.push_back(make_residual_row(exp, instance_id, seed, "trunc_diag_descent",
                                     diag1 - diag0, 1e-9));
    const double col_inf = operator_norm(linf, sym.conditioned_operand(trunc.a, Side::Column));
    const double row_inf = operator_norm(linf, sym.conditioned_operand(trunc.b, Side::Row));
    double d_l2 = 0.0;
    for (const Operator& di : trunc.d) d_l2 += trace(di.adjoint() * di).real();
    d_l2 = std::sqrt(std::max(d_l2, 0.0));
    rows.push_back(make_bound_row(exp, instance_id, seed, "trunc_bound_col", col_inf, M, 5.0,
                                  slack));
    rows.push_back(make_bound_row(exp, instance_id, seed, "trunc_bound_row", row_inf, M, 5.0,
                                  slack));
    rows.push_back(make_bound_row(exp, instance_id, seed, "trunc_bound_diag_l2", d_l2, M, 5.0,
                                  slack));
  }

  return rows;
}

}  // namespace freenorm
