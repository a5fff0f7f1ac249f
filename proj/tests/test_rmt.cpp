#include "doctest.h"

#include <cmath>

#include "freenorm/free_sums.hpp"
#include "freenorm/rmt.hpp"

using namespace freenorm;

namespace {

Operator bernoulli() {
  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = -1.0;
  return Operator::from_matrix(b);
}

}  // namespace

TEST_CASE("haar unitaries are unitary and deterministic") {
  Rng gen = make_rng(61, 0);
  const Matrix u = sample_haar_unitary(16, gen);
  CHECK((u.adjoint() * u - Matrix::Identity(16, 16)).norm() <= 1e-12);

  Rng g2 = make_rng(61, 0);
  const Matrix v = sample_haar_unitary(16, g2);
  CHECK((u - v).norm() == doctest::Approx(0.0));

  Rng g3 = make_rng(61, 1);
  const Matrix w = sample_haar_unitary(16, g3);
  CHECK((u - w).norm() > 1e-3);
}

TEST_CASE("full matrix model preserves the trace and rearrangement") {
  const AlgebraPtr alg = make_algebra({{2, 2.0 / 3.0}, {1, 1.0 / 3.0}});
  std::vector<Matrix> blocks;
  Matrix b0(2, 2);
  b0 << 3.0, 0.0, 0.0, 1.0;
  blocks.push_back(b0);
  blocks.push_back(Matrix::Constant(1, 1, Complex(-2.0, 0.0)));
  const Operator x(alg, std::move(blocks));

  const Matrix m = full_matrix_model(x, 6);
  CHECK(m.rows() >= 6);
  CHECK(m.trace().real() / static_cast<double>(m.rows()) ==
        doctest::Approx(trace(x).real() / x.algebra().total_mass()).epsilon(1e-12));

  // eigenvalue histogram matches mu up to overall mass normalization
  Eigen::SelfAdjointEigenSolver<Matrix> es(m * 0.0 + m);  // m is diagonal real here
  const StepFunction mu = singular_value_function(x);
  std::vector<double> sv;
  for (int i = 0; i < m.rows(); ++i) sv.push_back(std::abs(m(i, i).real()));
  std::sort(sv.rbegin(), sv.rend());
  // count proportions: value 3 has width (2/3)/2 = 1/3 of the total mass
  int count3 = 0;
  for (double v : sv) count3 += v == doctest::Approx(3.0) ? 1 : 0;
  CHECK(static_cast<double>(count3) / m.rows() == doctest::Approx(1.0 / 3.0));

  // incommensurable weights are rejected
  const AlgebraPtr bad = make_algebra({{2, 1.0}, {1, 1.0 / std::sqrt(2.0)}});
  const Operator y(bad, {Matrix::Identity(2, 2), Matrix::Identity(1, 1)});
  CHECK_THROWS_AS(full_matrix_model(y, 1), std::invalid_argument);
}

TEST_CASE("single summand model keeps the rearrangement") {
  Rng gen = make_rng(62, 0);
  const Operator x = random_centered(3, false, gen);
  const FreeFamily fam = FreeFamily::over_scalars({x});
  ModelConfig cfg;
  cfg.N = 48;
  cfg.trials = 2;
  cfg.seed = 7;
  const std::vector<StepFunction> mus = model_mu_samples(fam, cfg);
  REQUIRE(mus.size() == 2);
  const StepFunction base = singular_value_function(x);
  for (const StepFunction& mu : mus) {
    CHECK(mu.sup() == doctest::Approx(base.sup()).epsilon(1e-9));
    CHECK(mu.integral() == doctest::Approx(base.integral()).epsilon(1e-9));
    CHECK(mu.lp_norm(2.0) == doctest::Approx(base.lp_norm(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("model samples are reproducible by seed") {
  const FreeFamily fam = FreeFamily::over_scalars({bernoulli(), bernoulli()});
  ModelConfig cfg;
  cfg.N = 32;
  cfg.trials = 3;
  cfg.seed = 11;
  const ModelNorm a = model_symmetric_norm(fam, SymmetricSpace::linf(), cfg);
  const ModelNorm b = model_symmetric_norm(fam, SymmetricSpace::linf(), cfg);
  CHECK(a.mean == doctest::Approx(b.mean));
  CHECK(a.values.size() == 3);
  cfg.seed = 12;
  const ModelNorm c = model_symmetric_norm(fam, SymmetricSpace::linf(), cfg);
  CHECK(std::abs(a.mean - c.mean) > 1e-9);
}

TEST_CASE("two free sign variables reach the arcsine edge") {
  const FreeFamily fam = FreeFamily::over_scalars({bernoulli(), bernoulli()});
  ModelConfig cfg;
  cfg.N = 128;
  cfg.trials = 4;
  cfg.seed = 5;
  const ModelNorm m = model_symmetric_norm(fam, SymmetricSpace::linf(), cfg);
  CHECK(m.mean == doctest::Approx(2.0).epsilon(0.06));

  // operator-norm sandwich between the cap parts and their sum
  const CapNorm cn = cap_norm(fam, SymmetricSpace::linf());
  CHECK(cn.value <= m.mean * 1.05);
  CHECK(m.mean <= (cn.column + cn.row + cn.diagonal) * 1.05);
}

TEST_CASE("degenerate model of a fixed operator") {
  Rng gen = make_rng(63, 0);
  const Operator x = random_centered(4, false, gen);
  ModelConfig cfg;
  cfg.trials = 3;
  const ModelNorm m = model_symmetric_norm(x, SymmetricSpace::lp(2.0), cfg);
  CHECK(m.mean == doctest::Approx(x.l2_norm()).epsilon(1e-10));
  CHECK(m.spread <= 1e-12);
}

TEST_CASE("verify rows for a small family") {
  const FreeFamily fam = FreeFamily::over_scalars({bernoulli(), bernoulli()});
  VerifyOptions opt;
  opt.spaces = {SymmetricSpace::lp(2.0), SymmetricSpace::linf()};
  opt.model.N = 96;
  opt.model.trials = 4;
  opt.model.seed = 3;
  opt.solver.max_iter = 2000;
  const std::vector<ReportRow> rows = verify_free_sum_inequalities(fam, opt, "bernoulli_pair");
  CHECK(rows.size() > 10);
  for (const ReportRow& r : rows) {
    INFO(r.quantity, " lhs=", r.lhs, " rhs=", r.rhs);
    CHECK(r.pass);
  }
  CHECK(all_pass(rows));
}
