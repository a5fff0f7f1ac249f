#include "doctest.h"

#include <cmath>
#include <random>

#include "freenorm/algebra.hpp"
#include "freenorm/random.hpp"
#include "freenorm/step_function.hpp"

using namespace freenorm;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Operator diag_op(std::initializer_list<double> values, double mass = 1.0) {
  Matrix m = Matrix::Zero(static_cast<int>(values.size()), static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return Operator::from_matrix(m, mass);
}

}  // namespace

TEST_CASE("step function basics") {
  StepFunction mu({{3.0, 0.5}, {1.0, 0.5}});
  CHECK(mu.total_width() == doctest::Approx(1.0));
  CHECK(mu.integral() == doctest::Approx(2.0));
  CHECK(mu.sup() == doctest::Approx(3.0));
  CHECK(mu.value_at(0.25) == doctest::Approx(3.0));
  // right-continuity at the jump
  CHECK(mu.value_at(0.5) == doctest::Approx(1.0));
  CHECK(mu.value_at(2.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mu.value_at(0.0), std::invalid_argument);

  CHECK(mu.k_functional(0.5) == doctest::Approx(1.5));
  CHECK(mu.k_functional(0.75) == doctest::Approx(1.75));
  CHECK(mu.k_functional(1.0) == doctest::Approx(2.0));
  CHECK(mu.k_functional(3.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(mu.k_functional(0.0), std::invalid_argument);

  CHECK(mu.lp_norm(1.0) == doctest::Approx(2.0));
  CHECK(mu.lp_norm(2.0) == doctest::Approx(std::sqrt(5.0)));
  CHECK(mu.lp_norm(std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));

  const StepFunction h = mu.head(0.25);
  CHECK(h.integral() == doctest::Approx(0.75));
  const StepFunction c = mu.clipped(2.0);
  CHECK(c.sup() == doctest::Approx(2.0));
  CHECK(c.integral() == doctest::Approx(1.5));
}

TEST_CASE("step function sorting and merge") {
  const StepFunction mu = StepFunction::from_unsorted({{1.0, 0.5}, {3.0, 0.25}, {2.0, 0.25}});
  CHECK(mu.sup() == doctest::Approx(3.0));
  CHECK(mu.value_at(0.3) == doctest::Approx(2.0));
  CHECK(mu.value_at(0.6) == doctest::Approx(1.0));

  const StepFunction m =
      StepFunction::merge({StepFunction({{2.0, 1.0}}), StepFunction({{3.0, 0.5}})});
  CHECK(m.sup() == doctest::Approx(3.0));
  CHECK(m.total_width() == doctest::Approx(1.5));
  CHECK(m.integral() == doctest::Approx(3.5));
}

TEST_CASE("submajorization") {
  const StepFunction f({{2.0, 1.0}});
  const StepFunction g({{1.0, 1.0}});
  CHECK(submajorizes(f, f));
  CHECK(submajorizes(f, g));
  CHECK_FALSE(submajorizes(g, f));
  // equal integral, more spread out: diag(2,0) vs diag(1,1)
  const StepFunction spread({{2.0, 0.5}});
  const StepFunction flat({{1.0, 1.0}});
  CHECK(submajorizes(spread, flat));
  CHECK_FALSE(submajorizes(flat, spread));
}

TEST_CASE("trace and weights") {
  const AlgebraPtr alg = make_algebra({{2, 0.5}, {1, 0.5}});
  std::vector<Matrix> blocks;
  blocks.push_back(mat2(1.0, 0.0, 0.0, 3.0));
  blocks.push_back(Matrix::Constant(1, 1, Complex(4.0, 0.0)));
  const Operator x(alg, std::move(blocks));
  // tau = 0.5 * (1+3)/2 + 0.5 * 4
  CHECK(trace(x).real() == doctest::Approx(3.0));
  CHECK(x.algebra().total_mass() == doctest::Approx(1.0));
  CHECK(x.algebra().weight(0) == doctest::Approx(0.25));

  const Operator id = Operator::identity(alg);
  CHECK(trace(id).real() == doctest::Approx(1.0));
  CHECK(id.sup_norm() == doctest::Approx(1.0));
  CHECK(id.l2_norm() == doctest::Approx(1.0));
}

TEST_CASE("singular value function") {
  const Operator x = diag_op({3.0, 1.0});
  const StepFunction mu = singular_value_function(x);
  CHECK(mu.sup() == doctest::Approx(3.0));
  CHECK(mu.value_at(0.6) == doctest::Approx(1.0));
  CHECK(mu.integral() == doctest::Approx(2.0));

  // integral of mu = trace |x| for a random operator
  Rng gen = make_rng(7, 0);
  const Operator r = random_centered(5, false, gen);
  const Operator abs_r = sqrt_psd(r.adjoint() * r);
  CHECK(singular_value_function(r).integral() == doctest::Approx(trace(abs_r).real()).epsilon(1e-10));
}

TEST_CASE("mu is unitarily invariant") {
  Rng gen = make_rng(11, 0);
  const Operator x = random_centered(4, false, gen);
  const Matrix u = [&] {
    Matrix g = ginibre(4, 4, gen);
    return Matrix(Eigen::HouseholderQR<Matrix>(g).householderQ());
  }();
  const Operator ux(x.algebra_ptr(), {u * x.block(0) * u.adjoint()});
  const StepFunction a = singular_value_function(x);
  const StepFunction b = singular_value_function(ux);
  REQUIRE(a.steps().size() == b.steps().size());
  for (std::size_t i = 0; i < a.steps().size(); ++i)
    CHECK(a.steps()[i].value == doctest::Approx(b.steps()[i].value).epsilon(1e-10));
}

TEST_CASE("k functional matches variational oracle") {
  Rng gen = make_rng(3, 0);
  const Operator x = random_centered(6, false, gen);
  const StepFunction mu = singular_value_function(x);
  const double t = 0.3;
  const double k = mu.k_functional(t);
  // min over cut levels c of ||(mu-c)_+||_1 + t*c, scanned on the step values
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> levels{0.0};
  for (const Step& s : mu.steps()) levels.push_back(s.value);
  for (double c : levels) {
    double l1 = 0.0;
    for (const Step& s : mu.steps()) l1 += std::max(s.value - c, 0.0) * s.width;
    best = std::min(best, l1 + t * c);
  }
  CHECK(k == doctest::Approx(best).epsilon(1e-10));
  // concavity in t on a grid
  double prev = mu.k_functional(0.05);
  double prev_slope = prev / 0.05;
  for (double tt = 0.10; tt <= 1.0; tt += 0.05) {
    const double cur = mu.k_functional(tt);
    const double slope = (cur - prev) / 0.05;
    CHECK(slope <= prev_slope + 1e-12);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
    prev_slope = slope;
  }
}

TEST_CASE("functional calculus") {
  const Operator x = diag_op({3.0, 1.0});
  const Operator ind = functional_calculus(x, [](double v) { return v >= 2.0 ? 1.0 : 0.0; });
  CHECK(ind.block(0)(0, 0).real() == doctest::Approx(1.0));
  CHECK(ind.block(0)(1, 1).real() == doctest::Approx(0.0));

  Rng gen = make_rng(5, 0);
  const Operator g = random_centered(5, false, gen);
  const Operator h = 0.5 * (g + g.adjoint());
  const Operator pos = h * h;  // psd
  const Operator root = functional_calculus(pos, [](double v) { return std::sqrt(std::max(v, 0.0)); });
  CHECK((root * root - pos).sup_norm() <= 1e-9 * (1.0 + pos.sup_norm()));

  // non-hermitian input is rejected, not silently symmetrized
  CHECK_THROWS_AS(functional_calculus(g, [](double v) { return v; }), std::invalid_argument);
}

TEST_CASE("polar decomposition") {
  const Operator neg = diag_op({-2.0, 0.0});
  const PolarDecomposition pd = polar_decompose(neg);
  CHECK(pd.a.block(0)(0, 0).real() == doctest::Approx(2.0));
  CHECK(pd.a.block(0)(1, 1).real() == doctest::Approx(0.0));
  CHECK(pd.u.block(0)(0, 0).real() == doctest::Approx(-1.0));
  CHECK(std::abs(pd.u.block(0)(1, 1)) == doctest::Approx(0.0));

  Rng gen = make_rng(9, 0);
  const Operator x = random_centered(5, false, gen);
  const PolarDecomposition rp = polar_decompose(x);
  CHECK((x - rp.u * rp.a).sup_norm() <= 1e-10 * (1.0 + x.sup_norm()));
  CHECK(rp.u.sup_norm() <= 1.0 + 1e-10);
  // u*u is the support projection of a
  const Operator supp = support_projection(rp.a);
  CHECK((rp.u.adjoint() * rp.u - supp).sup_norm() <= 1e-9);
}

TEST_CASE("direct sum keeps masses") {
  const Operator x = diag_op({1.0, -1.0});
  const Operator y = diag_op({2.0});
  const Operator s = direct_sum({x, y});
  CHECK(s.algebra().total_mass() == doctest::Approx(2.0));
  CHECK(s.sup_norm() == doctest::Approx(2.0));
  const StepFunction mu = singular_value_function(s);
  CHECK(mu.integral() == doctest::Approx(1.0 + 2.0));
}

TEST_CASE("psd helpers") {
  Rng gen = make_rng(13, 0);
  const Operator g = random_centered(4, false, gen);
  const Operator p = g.adjoint() * g;
  const Operator r = sqrt_psd(p);
  CHECK((r * r - p).sup_norm() <= 1e-9 * (1.0 + p.sup_norm()));
  const Operator pi = pinv_psd(p);
  const Operator supp = support_projection(p);
  CHECK((p * pi - supp).sup_norm() <= 1e-8 * (1.0 + p.sup_norm()));
  CHECK(restricted_min_eig(supp, supp) == doctest::Approx(1.0));
  CHECK(restricted_min_eig(p, Operator::zero(p.algebra_ptr())) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("hermiticity defect") {
  const Operator h = diag_op({1.0, 2.0});
  CHECK(h.is_hermitian());
  Matrix m = mat2(0.0, 1.0, 0.0, 0.0);
  const Operator n = Operator::from_matrix(m);
  CHECK_FALSE(n.is_hermitian());
  CHECK(n.hermiticity_defect() > 0.5);
}
