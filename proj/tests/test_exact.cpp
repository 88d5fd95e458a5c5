#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "siac/errors.hpp"
#include "siac/exact.hpp"

using siac::RatMatrix;
using siac::RatPoly;
using siac::Rational;

TEST_CASE("rational normal form") {
  const Rational r(6, -4);
  CHECK(r.numerator() == -3);
  CHECK(r.denominator() == 2);
  CHECK(Rational(0, -7).to_string() == "0");
  CHECK(Rational(0, -7).denominator() == 1);
  CHECK(Rational(10, 5).is_integer());
  CHECK_THROWS_AS(Rational(1, 0), siac::DivisionByZero);
  CHECK_THROWS_AS(Rational(1) / Rational(0), siac::DivisionByZero);
}

TEST_CASE("rational arithmetic") {
  const Rational a(1, 3), b(-5, 6);
  CHECK(a + b == Rational(-1, 2));
  CHECK(a - b == Rational(7, 6));
  CHECK(a * b == Rational(-5, 18));
  CHECK(a / b == Rational(-2, 5));
  CHECK(-b == Rational(5, 6));
  CHECK(pow(Rational(-2, 3), 3) == Rational(-8, 27));
  CHECK(abs(b) == Rational(5, 6));
  CHECK(floor(Rational(-7, 2)) == -4);
  CHECK(ceil(Rational(-7, 2)) == -3);
  CHECK(floor(Rational(7, 2)) == 3);
  CHECK(siac::binomial(6, 2) == 15);
  CHECK(siac::binomial(3, 5) == 0);
  CHECK(siac::factorial(5) == 120);
}

TEST_CASE("rational text round trip") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational r = oracle::random_rational(rng, 100000, 9973);
    CHECK(Rational::parse(r.to_string()) == r);
  }
  CHECK(Rational::parse("-1.25") == Rational(-5, 4));
  CHECK(Rational::parse("3/9") == Rational(1, 3));
  CHECK(Rational::parse("2.5e-1") == Rational(1, 4));
  CHECK_THROWS_AS(Rational::parse(""), siac::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/x"), siac::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/0"), siac::DivisionByZero);
}

TEST_CASE("double conversion") {
  CHECK(Rational::from_double(0.375) == Rational(3, 8));
  CHECK(Rational::from_double(-2.0) == -2);
  CHECK(Rational::from_double(0.1).to_double() == 0.1);
  CHECK(Rational(1, 3).to_double() == 1.0 / 3.0);
  CHECK(Rational(-2, 3).to_double() == -2.0 / 3.0);
}

TEST_CASE("solve_exact examples") {
  const auto a = RatMatrix::from_rows({{1, 1}, {-3, -1}});
  const auto x = siac::solve_exact(a, RatMatrix::from_rows({{1}, {0}}));
  CHECK(x(0, 0) == Rational(-1, 2));
  CHECK(x(1, 0) == Rational(3, 2));

  const auto b = RatMatrix::from_rows({{5}, {0}, {-2}});
  CHECK(siac::solve_exact(RatMatrix::identity(3), b) == b);

  const std::vector<std::vector<Rational>> s{{1, 1, 1}, {-3, 0, 3}, {7, 1, 7}};
  const auto xs = siac::solve_exact(RatMatrix::from_rows(s), RatMatrix::from_rows({{1}, {0}, {0}}));
  const auto cr = oracle::cramer(s, {1, 0, 0});
  CHECK(xs.column_values(0) == cr);
  CHECK(cr == std::vector<Rational>{Rational(-1, 12), Rational(7, 6), Rational(-1, 12)});
}

TEST_CASE("invert_exact examples") {
  const auto inv = siac::invert_exact(RatMatrix::from_rows({{1, 1}, {-3, -1}}));
  CHECK(inv == RatMatrix::from_rows({{Rational(-1, 2), Rational(-1, 2)}, {Rational(3, 2), Rational(1, 2)}}));
  CHECK(siac::invert_exact(RatMatrix::identity(4)) == RatMatrix::identity(4));
  const std::vector<Rational> diag{2, 3};
  const std::vector<Rational> inv_diag{Rational(1, 2), Rational(1, 3)};
  CHECK(siac::invert_exact(RatMatrix::diagonal(diag)) == RatMatrix::diagonal(inv_diag));
}

TEST_CASE("zero leading pivot needs a row swap") {
  const std::vector<std::vector<Rational>> a{{0, 2, 1}, {1, 0, 0}, {3, 1, 4}};
  const auto x = siac::solve_exact(RatMatrix::from_rows(a), RatMatrix::from_rows({{1}, {2}, {3}}));
  CHECK(x.column_values(0) == oracle::cramer(a, {1, 2, 3}));
}

TEST_CASE("singular and mismatched systems") {
  const auto sing = RatMatrix::from_rows({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(siac::invert_exact(sing), siac::SingularMatrix);
  CHECK_THROWS_AS(siac::solve_exact(sing, RatMatrix::from_rows({{1}, {1}})), siac::SingularMatrix);
  CHECK(siac::determinant(sing) == 0);
  CHECK_THROWS_AS(siac::solve_exact(RatMatrix::identity(2), RatMatrix::identity(3)), siac::DimensionMismatch);
  CHECK_THROWS_AS(RatMatrix::identity(2) * RatMatrix::identity(3), siac::DimensionMismatch);
}

TEST_CASE("random matrices: inverse, solve and determinant are exact") {
  std::mt19937 rng(2024);
  int tested = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 6;
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n));
    for (auto& row : rows)
      for (auto& v : row) v = oracle::random_rational(rng, 9, 4);
    const auto a = RatMatrix::from_rows(rows);
    const Rational det = oracle::cofactor_det(rows);
    CHECK(siac::determinant(a) == det);
    if (det.is_zero()) continue;
    ++tested;
    const auto inv = siac::invert_exact(a);
    CHECK(inv * a == RatMatrix::identity(n));
    CHECK(a * inv == RatMatrix::identity(n));
    std::vector<Rational> bv(n);
    for (auto& v : bv) v = oracle::random_rational(rng, 20, 7);
    const auto b = RatMatrix::column(bv);
    const auto x = siac::solve_exact(a, b);
    CHECK(a * x == b);
    if (n <= 4) CHECK(x.column_values(0) == oracle::cramer(rows, bv));
  }
  CHECK(tested > 40);
}

TEST_CASE("matrix helpers") {
  const auto m = RatMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.entries().size() == 6);
  CHECK(m.transpose()(2, 1) == 6);
  CHECK(m.row_values(1) == std::vector<Rational>{4, 5, 6});
  CHECK(m.column_values(1) == std::vector<Rational>{2, 5});
  CHECK(m + m - m == m);
  CHECK(m.to_double()[5] == 6.0);
  CHECK_THROWS_AS(RatMatrix::from_rows({{1, 2}, {3}}), siac::DimensionMismatch);
}

TEST_CASE("polynomial trimming and evaluation") {
  const RatPoly p({1, 2, 0, 0});
  CHECK(p.degree() == 1);
  CHECK(p.coeffs().size() == 2);
  CHECK(RatPoly({0, 0}).is_zero());
  CHECK(RatPoly({0, 0}).coeffs().size() == 1);
  const RatPoly q({1, -3, 2}, Rational(1, 2));  // 1 - 3(x-1/2) + 2(x-1/2)^2
  const Rational x(5, 7);
  const Rational y = x - Rational(1, 2);
  CHECK(q(x) == 1 - 3 * y + 2 * y * y);
  CHECK(q.eval(0.3) == doctest::Approx(q(Rational::from_double(0.3)).to_double()).epsilon(1e-15));
}

TEST_CASE("polynomial algebra") {
  const RatPoly p({1, 2, 3});
  const RatPoly q({Rational(-1, 2), 1}, Rational(2));
  CHECK(p.recentered(Rational(3)) == p);
  CHECK((p * q)(Rational(7, 3)) == p(Rational(7, 3)) * q(Rational(7, 3)));
  CHECK((p + q)(Rational(-1)) == p(Rational(-1)) + q(Rational(-1)));
  CHECK((p - p).is_zero());
  CHECK(p.derivative() == RatPoly({2, 6}));
  CHECK(p.derivative(3).is_zero());
  CHECK(p.antiderivative().derivative() == p);
  CHECK(p.integral(0, 1) == 1 + 1 + 1);
  CHECK(p.integral(-1, 2) == Rational(3) + Rational(3) + Rational(9));
  // p(2x - 1)
  const RatPoly c = p.compose_affine(2, -1);
  for (int i = -3; i <= 3; ++i) CHECK(c(Rational(i, 3)) == p(2 * Rational(i, 3) - 1));
  CHECK((Rational(3) * p)(2) == 3 * p(2));
}
