#include "doctest.h"

#include <cmath>

#include "freenorm/conditioned.hpp"
#include "freenorm/random.hpp"

using namespace freenorm;

namespace {

ConditionalExpectation diag_pinching(int dim) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < dim; ++i) groups.push_back({i});
  return ConditionalExpectation::pinching({groups});
}

ConditionalExpectation identity_ce(int dim) {
  std::vector<int> all(dim);
  for (int i = 0; i < dim; ++i) all[i] = i;
  return ConditionalExpectation::pinching({{all}});
}

}  // namespace

TEST_CASE("pinching and scalar examples") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Operator x = Operator::from_matrix(m);
  const Operator px = diag_pinching(2).apply(x);
  CHECK(std::abs(px.block(0)(0, 0) - Complex(1.0)) <= 1e-14);
  CHECK(std::abs(px.block(0)(0, 1)) <= 1e-14);
  CHECK(std::abs(px.block(0)(1, 1) - Complex(4.0)) <= 1e-14);

  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = -1.0;
  const Operator bern = Operator::from_matrix(b);
  CHECK(ConditionalExpectation::scalar().apply(bern).sup_norm() <= 1e-14);
}

TEST_CASE("conditional expectation invariants") {
  Rng gen = make_rng(31, 0);
  const std::vector<ConditionalExpectation> ces = {
      ConditionalExpectation::scalar(),
      diag_pinching(4),
      ConditionalExpectation::pinching({{{0, 1}, {2, 3}}}),
      ConditionalExpectation::partial_trace({{2, 2}}),
      ConditionalExpectation::compose(
          {ConditionalExpectation::pinching({{{0, 1}, {2, 3}}}), ConditionalExpectation::scalar()}),
  };
  for (const ConditionalExpectation& ce : ces) {
    for (int rep = 0; rep < 5; ++rep) {
      const Operator x = random_centered(4, false, gen);
      const Operator ex = ce.apply(x);
      // idempotent and trace preserving
      CHECK((ce.apply(ex) - ex).sup_norm() <= 1e-10 * (1.0 + ex.sup_norm()));
      CHECK(std::abs(trace(ex) - trace(x)) <= 1e-12);
      // positivity
      const Operator p = x.adjoint() * x;
      const Operator ep = ce.apply(p);
      Eigen::SelfAdjointEigenSolver<Matrix> es(ep.block(0));
      CHECK(es.eigenvalues().minCoeff() >= -1e-10);
      // bimodularity over the range
      const Operator a = ce.apply(random_centered(4, false, gen));
      const Operator bmod = ce.apply(random_centered(4, false, gen));
      CHECK((ce.apply(a * x * bmod) - a * ex * bmod).sup_norm() <= 1e-9);
      // contraction in each norm via submajorization of rearrangements
      CHECK(submajorizes(singular_value_function(x), singular_value_function(ex)));
    }
  }
}

TEST_CASE("adjoint pairing") {
  Rng gen = make_rng(32, 0);
  const std::vector<ConditionalExpectation> ces = {
      ConditionalExpectation::scalar(),
      ConditionalExpectation::pinching({{{0, 2}, {1, 3}}}),
      ConditionalExpectation::partial_trace({{2, 2}}),
  };
  for (const ConditionalExpectation& ce : ces) {
    const Operator x = random_centered(4, false, gen);
    const Operator y = random_centered(4, false, gen);
    // unweighted Frobenius pairing <E x, y> = <x, E* y>
    Complex lhs = 0.0, rhs = 0.0;
    const Operator ex = ce.apply(x);
    const Operator ay = ce.apply_adjoint(y);
    for (std::size_t b = 0; b < x.block_count(); ++b) {
      lhs += (ex.block(b).adjoint() * y.block(b)).trace();
      rhs += (x.block(b).adjoint() * ay.block(b)).trace();
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("conditioned norms") {
  Rng gen = make_rng(33, 0);
  const Operator x = random_centered(4, false, gen);
  const ConditionalExpectation sc = ConditionalExpectation::scalar();
  const SymmetricSpace l2 = SymmetricSpace::lp(2.0);
  CHECK(conditioned_norm(sc, {x}, Side::Column, l2) == doctest::Approx(x.l2_norm()));
  CHECK(conditioned_norm(sc, {x}, Side::Row, l2) == doctest::Approx(x.l2_norm()));
  CHECK(conditioned_norm(sc, {x}, Side::Diagonal, l2) == doctest::Approx(x.l2_norm()));

  Matrix b = Matrix::Zero(2, 2);
  b(0, 0) = 1.0;
  b(1, 1) = -1.0;
  const Operator bern = Operator::from_matrix(b);
  const SymmetricSpace linf = SymmetricSpace::linf();
  CHECK(conditioned_norm(sc, {bern, bern}, Side::Column, linf) == doctest::Approx(std::sqrt(2.0)));
  CHECK(conditioned_norm(sc, {bern, bern}, Side::Diagonal, linf) == doctest::Approx(1.0));

  // p = 4 column norm against an eigenvalue oracle
  const ConditionalExpectation pin = ConditionalExpectation::pinching({{{0, 1}, {2, 3}}});
  const Operator y = random_centered(4, false, gen);
  const Operator op = pin.apply(x.adjoint() * x + y.adjoint() * y);
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.block(0));
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += std::pow(std::max(es.eigenvalues()(i), 0.0), 2.0) / 4.0;
  CHECK(conditioned_norm(pin, {x, y}, Side::Column, SymmetricSpace::lp(4.0)) ==
        doctest::Approx(std::pow(acc, 0.25)).epsilon(1e-9));
}

TEST_CASE("e polar decomposition") {
  Rng gen = make_rng(34, 0);

  // positive x under the identity expectation: u is the support of x
  const Operator g = random_centered(3, false, gen);
  const Operator pos = g.adjoint() * g;
  const EPolarDecomposition ep = e_polar_decompose(identity_ce(3), pos);
  CHECK((ep.alpha - pos).sup_norm() <= 1e-9 * (1.0 + pos.sup_norm()));
  CHECK((ep.u - support_projection(pos)).sup_norm() <= 1e-7);

  // unitary x under the scalar expectation: alpha = 1, u = x
  Matrix um(3, 3);
  um.setZero();
  um(0, 1) = 1.0;
  um(1, 2) = 1.0;
  um(2, 0) = 1.0;
  const Operator cyc = Operator::from_matrix(um);
  const EPolarDecomposition eu = e_polar_decompose(ConditionalExpectation::scalar(), cyc);
  CHECK((eu.alpha - Operator::identity(eu.alpha.algebra_ptr())).sup_norm() <= 1e-10);
  CHECK((eu.u - cyc).sup_norm() <= 1e-9);

  // reconstruction and support conditions for random x under a pinching
  const ConditionalExpectation pin = ConditionalExpectation::pinching({{{0, 1}, {2, 3}}});
  for (int rep = 0; rep < 5; ++rep) {
    const Operator x = random_centered(4, false, gen);
    const EPolarDecomposition e = e_polar_decompose(pin, x);
    CHECK((x - e.u * e.alpha).l2_norm() <= 1e-9 * (1.0 + x.l2_norm()));
    CHECK(pin.apply(e.u.adjoint() * e.u).sup_norm() <= 1.0 + 1e-9);
    const Operator supp = support_projection(e.alpha);
    CHECK(restricted_min_eig(pin.apply(e.u.adjoint() * e.u), supp) >= 1.0 - 1e-8);
  }
}

TEST_CASE("kadison factorization bound") {
  Rng gen = make_rng(35, 0);
  const ConditionalExpectation pin = ConditionalExpectation::pinching({{{0, 1}, {2, 3}}});
  for (int rep = 0; rep < 5; ++rep) {
    const EPolarDecomposition a = e_polar_decompose(pin, random_centered(4, false, gen));
    const EPolarDecomposition b = e_polar_decompose(pin, random_centered(4, false, gen));
    CHECK(pin.apply(a.u.adjoint() * b.u).sup_norm() <= 1.0 + 1e-9);
  }
}

TEST_CASE("duality extremizer") {
  Rng gen = make_rng(36, 0);
  const ConditionalExpectation sc = ConditionalExpectation::scalar();
  const ConditionalExpectation pin = ConditionalExpectation::pinching({{{0, 1}, {2, 3}}});
  const SymmetricSpace l2 = SymmetricSpace::lp(2.0);

  const Operator x = random_centered(4, false, gen);

  // p = 2 under any expectation: Cauchy-Schwarz equality with z = x / ||x||_2
  const DualityExtremizer d2 = duality_extremizer(sc, x, 2.0);
  CHECK(d2.value == doctest::Approx(x.l2_norm()).epsilon(1e-9));
  CHECK(std::abs(trace(d2.z.adjoint() * x)) == doctest::Approx(x.l2_norm()).epsilon(1e-9));

  // p = infinity with alpha = diag(2,1) under the diagonal pinching
  Matrix am(2, 2);
  am.setZero();
  am(0, 0) = 2.0;
  am(1, 1) = 1.0;
  const Operator ax = Operator::from_matrix(am);
  const DualityExtremizer dinf =
      duality_extremizer(diag_pinching(2), ax, std::numeric_limits<double>::infinity());
  CHECK(dinf.value == doctest::Approx(2.0).epsilon(1e-9));

  // generic p: value matches the conditioned norm; dual feasibility holds
  for (double p : {1.0, 1.5, 3.0}) {
    for (const ConditionalExpectation& ce : {sc, pin}) {
      const DualityExtremizer d = duality_extremizer(ce, x, p);
      const double target = conditioned_norm(ce, {x}, Side::Column, SymmetricSpace::lp(p));
      CHECK(std::abs(trace(d.z.adjoint() * x)) >= target - 1e-6);
      const double q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
      CHECK(conditioned_norm(ce, {d.z}, Side::Column, SymmetricSpace::lp(q)) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("descriptor parsing") {
  for (const char* d : {"scalar", "pinch:[[0,1],[2,3]]", "ptrace:legs=2x2",
                        "pinch:[[0,1],[2,3]];scalar"}) {
    const ConditionalExpectation ce = ConditionalExpectation::parse(d);
    const ConditionalExpectation again = ConditionalExpectation::parse(ce.descriptor());
    CHECK(ce.descriptor() == again.descriptor());
    Rng gen = make_rng(37, 0);
    const Operator x = random_centered(4, false, gen);
    CHECK((ce.apply(x) - again.apply(x)).sup_norm() <= 1e-14);
  }
  CHECK_THROWS_AS(ConditionalExpectation::parse("nope"), std::invalid_argument);
}
