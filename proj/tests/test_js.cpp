#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "freenorm/free_family.hpp"
#include "freenorm/js.hpp"
#include "freenorm/random.hpp"
#include "freenorm/report.hpp"

using namespace freenorm;

namespace {

SymmetricDiagonalFamily random_symmetric_family(int count, int half_dim, Rng& gen) {
  std::uniform_real_distribution<double> uniform(0.1, 3.0);
  std::vector<std::vector<double>> diagonals;
  for (int i = 0; i < count; ++i) {
    std::vector<double> diag;
    for (int j = 0; j < half_dim; ++j) {
      const double v = uniform(gen);
      diag.push_back(v);
      diag.push_back(-v);
    }
    std::shuffle(diag.begin(), diag.end(), gen);
    diagonals.push_back(std::move(diag));
  }
  return SymmetricDiagonalFamily(std::move(diagonals));
}

}  // namespace

TEST_CASE("symmetric diagonal families validate their spectra") {
  CHECK_THROWS_AS(SymmetricDiagonalFamily({{1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SymmetricDiagonalFamily({{1.0, -1.0, 1.0}}), std::invalid_argument);

  const SymmetricDiagonalFamily f({{2.0, -2.0, 0.0}, {1.0, -1.0}});
  CHECK(f.count() == 2);
  const StepFunction mu = f.embedding_mu();
  CHECK(mu.total_width() == doctest::Approx(2.0));
  CHECK(mu.sup() == doctest::Approx(2.0));
  // Widths follow the per-summand dimensions.
  CHECK(mu.value_at(0.5) == doctest::Approx(2.0));
  CHECK(mu.value_at(0.7) == doctest::Approx(1.0));
  CHECK(f.operators()[0].l2_norm() == doctest::Approx(std::sqrt(8.0 / 3.0)));
}

TEST_CASE("head-only splitting when the embedding mass is one") {
  const SymmetricDiagonalFamily f({{2.0, -2.0, 1.0, -1.0}});
  const JsDecomposition dec = js_decomposition(f);
  CHECK(dec.t == 0.0);
  // The whole spectrum is selected, the tail is empty and gamma = |x|.
  for (double qj : dec.q[0]) CHECK(qj == 1.0);
  CHECK(dec.w[0].sup_norm() == 0.0);
  for (int j = 0; j < 4; ++j)
    CHECK(dec.gamma[0].block(0)(j, j).real() ==
          doctest::Approx(std::abs(f.diagonals()[0][j])));
  CHECK(dec.diagnostics.at("reconstruction") <= 1e-12);
  CHECK(dec.diagnostics.at("cut") <= 1e-12);
  CHECK(dec.diagnostics.at("head_match") <= 1e-12);
  CHECK(dec.diagnostics.at("v_support_mass") == doctest::Approx(1.0));
}

TEST_CASE("tie selection cuts constant spectra deterministically") {
  const SymmetricDiagonalFamily f({{3.0, -3.0}, {3.0, -3.0}});
  const JsDecomposition dec = js_decomposition(f);
  CHECK(dec.t == doctest::Approx(3.0));
  // The first summand is preferred for the tied pair.
  CHECK(dec.q[0][0] == 1.0);
  CHECK(dec.q[0][1] == 1.0);
  CHECK(dec.q[1][0] == 0.0);
  CHECK(dec.q[1][1] == 0.0);
  // Unselected spectrum becomes the rescaled tail contraction.
  CHECK(dec.w[1].block(0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(dec.w[1].block(0)(1, 1).real() == doctest::Approx(-1.0));
  CHECK(dec.u[0].sup_norm() == doctest::Approx(1.0));
  CHECK(dec.diagnostics.at("reconstruction") <= 1e-12);
  CHECK(dec.diagnostics.at("cut") <= 1e-12);
  CHECK(dec.diagnostics.at("head_match") <= 1e-12);
  CHECK(dec.diagnostics.at("disjoint") == 0.0);
}

TEST_CASE("random aligned families split exactly") {
  Rng gen = make_rng(71);
  for (int inst = 0; inst < 4; ++inst) {
    const SymmetricDiagonalFamily f = random_symmetric_family(3, 3, gen);
    const JsDecomposition dec = js_decomposition(f);
    CAPTURE(inst);
    CHECK(dec.t > 0.0);
    CHECK(dec.diagnostics.at("reconstruction") <= 1e-12);
    CHECK(dec.diagnostics.at("cut") <= 1e-12);
    CHECK(dec.diagnostics.at("head_match") <= 1e-12);
    CHECK(dec.diagnostics.at("u_sup") <= 1.0 + 1e-12);
    CHECK(dec.diagnostics.at("disjoint") == 0.0);
    CHECK(dec.diagnostics.at("v_support_mass") == doctest::Approx(1.0));
    // The splitting reassembles each summand exactly.
    for (int i = 0; i < f.count(); ++i) {
      const Operator rebuilt = dec.t * dec.u[i] + dec.v[i] * dec.gamma[i];
      CHECK((f.operators()[i] - rebuilt).sup_norm() <= 1e-12);
    }
  }
}

TEST_CASE("constant-3 comparison rows") {
  JsOptions options;
  options.model.N = 64;
  options.model.trials = 3;
  options.model.seed = 17;

  // Single bounded summand: the model reproduces the spectrum exactly.
  const SymmetricDiagonalFamily single({{1.0, -1.0}});
  const std::vector<ReportRow> rows =
      verify_js(single, SymmetricSpace::linf(), options, "single");
  for (const ReportRow& row : rows) {
    CAPTURE(row.quantity);
    CHECK(row.pass);
  }

  // Zero family: both sides vanish.
  const SymmetricDiagonalFamily zero({{0.0, 0.0}});
  for (const ReportRow& row : verify_js(zero, SymmetricSpace::lp(2.0), options, "zero")) {
    CAPTURE(row.quantity);
    CHECK(row.pass);
  }

  // Four sign summands against the head-plus-tail functional.
  const SymmetricDiagonalFamily bernoulli(
      {{1.0, -1.0}, {1.0, -1.0}, {1.0, -1.0}, {1.0, -1.0}});
  JsOptions wide = options;
  wide.model.N = 96;
  wide.model.trials = 4;
  const std::vector<ReportRow> brows =
      verify_js(bernoulli, SymmetricSpace::l1_plus_t_linf(1.0), wide, "bernoulli4");
  for (const ReportRow& row : brows) {
    CAPTURE(row.quantity);
    CHECK(row.pass);
  }
  CHECK(all_pass(brows));

  // An unnormalized base space is rejected.
  CHECK_THROWS_AS(verify_js(single, SymmetricSpace::linf_cap_sl1(2.0), options, "bad"),
                  std::invalid_argument);
}

TEST_CASE("filtrations compose down to the coarser level") {
  const std::vector<std::vector<std::vector<int>>> partitions = {
      {{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}}, {{0, 1, 2, 3}}};
  const MatrixFiltration filtration = MatrixFiltration::from_partitions(4, partitions, true);
  CHECK(filtration.levels() == 4);

  Rng gen = make_rng(81);
  const Operator x = Operator::from_matrix(
      [&gen] {
        std::normal_distribution<double> gauss(0.0, 1.0);
        Matrix m(4, 4);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) m(r, c) = Complex(gauss(gen), gauss(gen));
        return m;
      }());

  for (int k = 0; k < filtration.levels(); ++k)
    for (int j = 0; j < filtration.levels(); ++j) {
      const Operator lhs = filtration.apply(k, filtration.apply(j, x));
      const Operator rhs = filtration.apply(std::min(k, j), x);
      CHECK((lhs - rhs).sup_norm() <= 1e-13);
    }
  // The last level is the identity.
  CHECK((filtration.apply(filtration.levels() - 1, x) - x).sup_norm() == 0.0);

  CHECK_THROWS_AS(MatrixFiltration::from_partitions(4, {{{0, 1}, {2}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MatrixFiltration::from_partitions(
                      4, {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 1, 2, 3}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MatrixFiltration::from_partitions(4, {{{0}, {1}, {2}, {3}}}),
                  std::invalid_argument);
}

TEST_CASE("successive differences telescope and are orthogonal") {
  const std::vector<std::vector<std::vector<int>>> partitions = {
      {{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}}, {{0, 1, 2, 3}}};
  const MatrixFiltration filtration = MatrixFiltration::from_partitions(4, partitions, true);

  Rng gen = make_rng(91);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = Complex(gauss(gen), gauss(gen));
  const Operator x = Operator::from_matrix(m);

  const std::vector<Operator> d = martingale_differences(filtration, x);
  CHECK(d.size() == 4);
  Operator sum = d[0];
  for (std::size_t k = 1; k < d.size(); ++k) sum += d[k];
  CHECK((sum - x).sup_norm() <= 1e-14);
  for (std::size_t k = 1; k < d.size(); ++k)
    CHECK(filtration.apply(static_cast<int>(k) - 1, d[k]).sup_norm() <= 1e-14);
  for (std::size_t j = 0; j < d.size(); ++j)
    for (std::size_t k = 0; k < d.size(); ++k)
      if (j != k) CHECK(std::abs(trace(d[j].adjoint() * d[k])) <= 1e-10);

  // Trivial two-level filtration: normalized trace then identity.
  const MatrixFiltration trivial = MatrixFiltration::from_partitions(4, {{{0, 1, 2, 3}}}, true);
  const std::vector<Operator> td = martingale_differences(trivial, x);
  CHECK(td.size() == 2);
  CHECK((td[0] - trace(x) * Operator::identity(x.algebra_ptr())).sup_norm() <= 1e-14);
  CHECK((td[1] - (x - td[0])).sup_norm() == 0.0);
}

TEST_CASE("square-function quantities") {
  const std::vector<std::vector<std::vector<int>>> partitions = {
      {{0, 1}, {2, 3}}, {{0, 1, 2, 3}}};
  const MatrixFiltration filtration = MatrixFiltration::from_partitions(4, partitions);

  // A first-level element has all three quantities equal to its norm.
  Matrix block = Matrix::Zero(4, 4);
  block(0, 0) = 1.0;
  block(0, 1) = Complex(0, 2);
  block(1, 0) = -1.0;
  block(2, 3) = 3.0;
  const Operator measurable = Operator::from_matrix(block);
  for (const SymmetricSpace& space :
       {SymmetricSpace::linf(), SymmetricSpace::lp(2.0), SymmetricSpace::lp(3.0)}) {
    const BurkholderNorms norms = burkholder_norms(filtration, measurable, space);
    const double direct = operator_norm(space, measurable);
    CHECK(norms.column == doctest::Approx(direct).epsilon(1e-10));
    CHECK(norms.row == doctest::Approx(direct).epsilon(1e-10));
    CHECK(norms.diagonal == doctest::Approx(direct).epsilon(1e-10));
  }

  // A single difference with scalar conditional variance.
  const MatrixFiltration two = MatrixFiltration::from_partitions(
      2, {{{0}, {1}}, {{0, 1}}});
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = 2.0;
  off(1, 0) = -2.0;
  const BurkholderNorms single = burkholder_norms(two, Operator::from_matrix(off),
                                                  SymmetricSpace::linf());
  CHECK(single.column == doctest::Approx(2.0));
  CHECK(single.row == doctest::Approx(2.0));

  // Hilbert-space case: all three quantities reproduce the norm of x.
  Rng gen = make_rng(101);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const MatrixFiltration full = MatrixFiltration::from_partitions(
      4, {{{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}}, {{0, 1, 2, 3}}}, true);
  for (int inst = 0; inst < 5; ++inst) {
    Matrix m(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = Complex(gauss(gen), gauss(gen));
    const Operator x = Operator::from_matrix(m);
    const BurkholderNorms norms = burkholder_norms(full, x, SymmetricSpace::lp(2.0));
    CAPTURE(inst);
    CHECK(norms.column == doctest::Approx(x.l2_norm()).epsilon(1e-9));
    CHECK(norms.row == doctest::Approx(x.l2_norm()).epsilon(1e-9));
    CHECK(norms.diagonal == doctest::Approx(x.l2_norm()).epsilon(1e-9));
  }
}
