#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "siac/errors.hpp"
#include "siac/spline.hpp"

using siac::KnotVector;
using siac::Rational;

TEST_CASE("unit B-spline values") {
  CHECK(siac::eval_unit_bspline(KnotVector{0, 1}, 0, 0.5) == 1.0);
  CHECK(siac::eval_unit_bspline(KnotVector{-1, 0, 1}, 1, 0.0) == doctest::Approx(1.0));
  CHECK(siac::eval_unit_bspline(KnotVector{0, 0, 1}, 1, 0.25) == doctest::Approx(1.5));
  CHECK(siac::eval_unit_bspline(KnotVector{0, 1}, 0, 1.5) == 0.0);
  CHECK(siac::eval_unit_bspline(KnotVector{0, 1}, 0, -0.1) == 0.0);
}

TEST_CASE("continuity conventions at knots") {
  // right-continuous inside, left limit at the final knot
  const KnotVector step{0, 1, 1};
  CHECK(siac::eval_unit_bspline(step, 1, 1.0) == doctest::Approx(2.0));
  CHECK(siac::eval_unit_bspline(KnotVector{0, 1}, 0, 1.0) == 1.0);
  CHECK(siac::eval_unit_bspline(KnotVector{0, 1}, 0, 0.0) == 1.0);
  const auto pw = siac::unit_bspline_piecewise(KnotVector{0, 1, 2}, 0 + 1);
  CHECK(pw(Rational(2)) == 0);
  CHECK(pw(Rational(1)) == 1);
}

TEST_CASE("degenerate support is rejected") {
  CHECK_THROWS_AS(siac::eval_unit_bspline(KnotVector{1, 1, 1}, 1, 1.0), siac::DegenerateSupport);
  CHECK_THROWS_AS(siac::unit_bspline_piecewise(KnotVector{2, 2}, 0), siac::DegenerateSupport);
  CHECK_THROWS_AS(siac::bspline_moment(KnotVector{0, 0, 0, 0}, 2, 1), siac::DegenerateSupport);
  CHECK_THROWS(siac::eval_unit_bspline(KnotVector{0, 1, 2}, 2, 0.5));
}

TEST_CASE("piecewise form examples") {
  const auto box = siac::unit_bspline_piecewise(KnotVector{0, 1}, 0);
  REQUIRE(box.pieces.size() == 1);
  CHECK(box.pieces[0] == siac::RatPoly::constant(1));

  const auto hat = siac::unit_bspline_piecewise(KnotVector{-1, 0, 1}, 1);
  REQUIRE(hat.pieces.size() == 2);
  CHECK(hat.pieces[0] == siac::RatPoly({1, 1}));
  CHECK(hat.pieces[1] == siac::RatPoly({1, -1}));

  const auto quad = siac::unit_bspline_piecewise(KnotVector{0, 1, 2, 3}, 2);
  CHECK(quad.pieces.size() == 3);
  for (const auto& p : quad.pieces) CHECK(p.degree() == 2);
  CHECK(quad.integral() == 1);
}

TEST_CASE("piecewise form agrees with Cox-de Boor") {
  std::mt19937 rng(5);
  const std::vector<std::pair<KnotVector, int>> cases{
      {KnotVector{0, 1, 2, 3}, 2},
      {KnotVector{-2, -1, 0, 1, 2}, 3},
      {KnotVector{0, 0, 1, 3}, 2},
      {KnotVector{-1, 0, 0, 0, 2}, 3},
      {KnotVector({Rational(-7, 2), Rational(-5, 2), Rational(1, 3)}), 1},
  };
  for (const auto& [knots, k] : cases) {
    const auto pw = siac::unit_bspline_piecewise(knots, k);
    std::uniform_real_distribution<double> dist(knots.front().to_double() - 0.5, knots.back().to_double() + 0.5);
    for (int i = 0; i < 100; ++i) {
      const double x = dist(rng);
      CHECK(pw.eval(x) == doctest::Approx(siac::eval_unit_bspline(knots, k, x)).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("moments") {
  CHECK(siac::bspline_moment(KnotVector{3, 4, 7}, 1, 0) == 1);
  CHECK(siac::bspline_moment(KnotVector{-1, 0, 1}, 1, 1) == 0);
  CHECK(siac::bspline_moment(KnotVector{-1, 0, 1}, 1, 2) == Rational(1, 6));
  // hand value: 2 * int_0^1 (1 - x) x^2 dx
  CHECK(Rational(2) * (Rational(1, 3) - Rational(1, 4)) == Rational(1, 6));
}

TEST_CASE("closed-form moments match exact integration of the piecewise form") {
  const std::vector<std::pair<KnotVector, int>> cases{
      {KnotVector{-2, -1, 0, 1}, 2},
      {KnotVector{0, 1}, 0},
      {KnotVector({Rational(-1, 2), Rational(1, 2)}), 0},
      {KnotVector{-3, -1, 0, 0, 2}, 3},
      {KnotVector{1, 2, 2, 2, 2, 2, 2, 2}, 6},
  };
  for (const auto& [knots, k] : cases) {
    const auto pw = siac::unit_bspline_piecewise(knots, k);
    for (unsigned m = 0; m <= 5u * 3 + 2; ++m) CHECK(siac::bspline_moment(knots, k, m) == pw.moment(m));
  }
}

TEST_CASE("moment translation covariance") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational c = oracle::random_rational(rng, 30, 7);
    const KnotVector t{-2, 0, 1, 3};
    CHECK(siac::bspline_moment(t.shifted(c), 2, 1) == siac::bspline_moment(t, 2, 1) + c);
  }
}

TEST_CASE("complete homogeneous polynomial") {
  const std::vector<Rational> v{2, 3};
  // h_2(a, b) = a^2 + ab + b^2
  CHECK(siac::complete_homogeneous(v, 2) == 4 + 6 + 9);
  CHECK(siac::complete_homogeneous(v, 0) == 1);
  const std::vector<Rational> w{1, -1, 2};
  // h_1 = sum
  CHECK(siac::complete_homogeneous(w, 1) == 2);
}

TEST_CASE("knot vector transforms") {
  const KnotVector t{-1, 0, 2};
  CHECK(t.reflected() == KnotVector{-2, 0, 1});
  CHECK(t.shifted(3) == KnotVector{2, 3, 5});
  CHECK(t.scaled(Rational(1, 2)).knots()[2] == 1);
  CHECK_THROWS(KnotVector{1, 0});
  // B(-s | t) = B(s | reflected t)
  for (double s : {-1.5, -0.3, 0.2, 0.9}) {
    CHECK(siac::eval_unit_bspline(t, 1, -s) == doctest::Approx(siac::eval_unit_bspline(t.reflected(), 1, s)));
  }
}

TEST_CASE("partition of unity of the normalized B-splines") {
  // Clamped cubic basis on knots 0,0,0,0,1,2,3,3,3,3: sum_i (t_{i+4}-t_i)/4 * B_i = 1
  const std::vector<long> kv{0, 0, 0, 0, 1, 2, 3, 3, 3, 3};
  for (double x : {0.0, 0.3, 1.0, 1.7, 2.5, 2.99}) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 4 < kv.size(); ++i) {
      const KnotVector w({kv[i], kv[i + 1], kv[i + 2], kv[i + 3], kv[i + 4]});
      sum += (kv[i + 4] - kv[i]) / 4.0 * siac::eval_unit_bspline(w, 3, x);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Bernstein basis") {
  CHECK(siac::bernstein_basis(1, 0, 0, 0.0, 1.0) == 1.0);
  CHECK(siac::bernstein_basis(2, 0, 1, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(siac::bernstein_basis(2, 3, 1, 0.5, 1.0) == 0.0);
  for (int d = 0; d <= 4; ++d) {
    for (double h : {1.0, 0.25}) {
      const double origin = -0.5;
      for (int l = 0; l <= d; ++l) {
        const double area = oracle::integrate(
            [&](double x) { return siac::bernstein_basis(d, 2, l, x, h, origin); }, origin + 2 * h, origin + 3 * h, 4);
        CHECK(area == doctest::Approx(h / (d + 1)).epsilon(1e-13));
      }
      double sum = 0.0;
      for (int l = 0; l <= d; ++l) sum += siac::bernstein_basis(d, 2, l, origin + 2.3 * h, h, origin);
      CHECK(sum == doctest::Approx(1.0));
    }
  }
  // scaling relation: phi(h x | h s) = phi(x | s)
  CHECK(siac::bernstein_basis(3, 1, 2, 1.4 * 0.2, 0.2) == doctest::Approx(siac::bernstein_basis(3, 1, 2, 1.4, 1.0)));
  const auto b = siac::bernstein_unit_poly(2, 1);
  CHECK(b(Rational(1, 2)) == Rational(1, 2));
  CHECK(b.integral(0, 1) == Rational(1, 3));
}
