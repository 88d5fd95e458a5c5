#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "siac/errors.hpp"
#include "siac/psiac.hpp"

using siac::Basis;
using siac::BlendProfile;
using siac::DGField;
using siac::Family;
using siac::FilterSpec;
using siac::KnotVector;
using siac::Mesh;
using siac::RatMatrix;
using siac::RatPoly;
using siac::Rational;
using siac::Side;

namespace {

FilterSpec two_box_spec() { return siac::make_custom_spec(KnotVector{-2, -1, 0}, 0, {0, 1}, Side::Left); }

// Piecewise-constant data: indicators of [0,1] and [3,4] on [0,7], h = 1.
DGField two_indicator_field() {
  DGField f(0, Mesh(0.0, 7.0, 7), Basis::Bernstein);
  f.coeffs = {1, 0, 0, 1, 0, 0, 0};
  return f;
}

DGField random_field(int d, const Mesh& mesh, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DGField f(d, mesh, Basis::Bernstein);
  for (auto& c : f.coeffs) c = dist(rng);
  return f;
}

// Exact Bernstein field of p (a polynomial in x) on a mesh [0, 1] with N elements.
DGField polynomial_field(const RatPoly& p, int degree, int N) {
  const RatPoly mesh_units = p.compose_affine(Rational(1, N), Rational(0));
  const auto coeffs = siac::bernstein_window(mesh_units, degree, Rational(0), N);
  DGField f(degree, Mesh(0.0, 1.0, N), Basis::Bernstein);
  for (std::size_t i = 0; i < coeffs.size(); ++i) f.coeffs[i] = coeffs[i].to_double();
  return f;
}

std::vector<FilterSpec> boundary_specs(int d) {
  std::vector<FilterSpec> out;
  for (Side side : {Side::Left, Side::Right}) {
    out.push_back(siac::build_spec(Family::NPk, d, side, 0));
    out.push_back(siac::build_spec(Family::RS, d, side));
    out.push_back(siac::build_spec(Family::SRV, d, side));
    out.push_back(siac::build_spec(Family::RLKV, d, side));
  }
  return out;
}

}  // namespace

TEST_CASE("window sizes") {
  CHECK(siac::window_elements(siac::build_spec(Family::NPk, 3, Side::Left, 0)) == 10);
  CHECK(siac::window_elements(siac::build_spec(Family::NPk, 2, Side::Left, 0)) == 7);
  CHECK(siac::window_elements(siac::build_spec(Family::SRV, 3, Side::Right)) == 16);
  CHECK(siac::window_elements(siac::build_spec(Family::RLKV, 1, Side::Left)) == 4);
}

TEST_CASE("NP0 T matrix has the closed form") {
  for (int d = 1; d <= 3; ++d) {
    for (Side side : {Side::Left, Side::Right}) {
      const auto spec = siac::build_spec(Family::NPk, d, side, 0);
      const RatMatrix t = siac::t_matrix(spec, d);
      CHECK(t == siac::np0_t_matrix(spec, d));
      // identity (x) ones / (d+1), up to the column order
      const std::size_t n = spec.size();
      REQUIRE(t.rows() == n * (d + 1));
      RatMatrix expected(n * (d + 1), n);
      for (std::size_t e = 0; e < n; ++e)
        for (int l = 0; l <= d; ++l) expected(e * (d + 1) + l, e) = Rational(1, d + 1);
      CHECK(t == expected);
    }
  }
  const auto t1 = siac::t_matrix(siac::build_spec(Family::NPk, 1, Side::Left, 0), 1);
  CHECK(t1.rows() == 8);
  CHECK(t1.cols() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    int halves = 0;
    for (std::size_t r = 0; r < 8; ++r) halves += t1(r, c) == Rational(1, 2) ? 1 : 0;
    CHECK(halves == 2);
  }
}

TEST_CASE("T column sums are one") {
  for (int d = 1; d <= 2; ++d) {
    for (const auto& spec : boundary_specs(d)) {
      const auto t = siac::t_matrix(spec, d);
      for (std::size_t c = 0; c < t.cols(); ++c) {
        Rational sum(0);
        for (std::size_t r = 0; r < t.rows(); ++r) sum += t(r, c);
        CHECK(sum == 1);
      }
    }
  }
  CHECK_THROWS_AS(siac::t_matrix(siac::build_spec(Family::Symmetric, 1, Side::Interior), 1),
                  siac::UnsupportedFamilySide);
  CHECK(siac::reversal_matrix(3) * siac::reversal_matrix(3) == RatMatrix::identity(3));
}

TEST_CASE("NP0 degree-3 endpoint vector") {
  const auto spec = siac::build_spec(Family::NPk, 3, Side::Left, 0);
  const auto q = siac::q_matrix(spec, 3);
  // x = a is xi = -5 against the anchor a + 5h
  const auto v = siac::endpoint_vector(q, Rational(-5));
  REQUIRE(v.size() == 40);
  CHECK(v[18] == Rational(70381, 10080));
  CHECK(v[19] == Rational(70381, 10080));
  CHECK(v[20] == Rational(-56627, 10080));
  CHECK(v[21] == Rational(-56627, 10080));
  Rational sum(0);
  for (const auto& x : v) {
    CHECK((x * 10080).is_integer());
    sum += x;
  }
  CHECK(sum == 1);
  const std::vector<long> scaled{7381, -17819, 38881, -61919, 70381, -56627, 31573, -11627, 2548, -252};
  for (std::size_t e = 0; e < 10; ++e)
    for (int l = 0; l < 4; ++l) CHECK(v[e * 4 + l] * 10080 == scaled[e]);
}

TEST_CASE("two-indicator example: boundary polynomial") {
  const auto spec = two_box_spec();
  const siac::BoundaryFilter filter(spec, 0);
  CHECK(filter.elements() == 2);

  // exact path: window coefficients of the first two elements
  const RatPoly exact = filter.apply_exact({1, 0});
  CHECK(exact == RatPoly({Rational(3, 2), -1}));  // (3 - 2x)/2 with xi = x here

  const auto p = filter.apply(two_indicator_field());
  CHECK(p.anchor == 0.0);
  CHECK(p.lo == 0.0);
  CHECK(p.hi == 2.0);
  REQUIRE(p.coeffs.size() == 2);
  CHECK(p.coeffs[0] == doctest::Approx(1.5));
  CHECK(p.coeffs[1] == doctest::Approx(-1.0));
  for (double x : {0.0, 0.5, 1.3, 2.0}) CHECK(p(x) == doctest::Approx((3 - 2 * x) / 2));

  const auto d1 = siac::filter_boundary_derivative(two_indicator_field(), spec, 1);
  CHECK(d1.degree() == 0);
  CHECK(d1.coeffs[0] == doctest::Approx(-1.0));
  const auto d0 = siac::filter_boundary_derivative(two_indicator_field(), spec, 0);
  CHECK(d0.coeffs == p.coeffs);
  CHECK(p.derivative(2).coeffs == std::vector<double>{0.0});
  CHECK_THROWS(siac::filter_boundary_derivative(two_indicator_field(), spec, 2));
}

TEST_CASE("two-indicator example: interior convolution with a centred box") {
  const auto spec = siac::make_custom_spec(KnotVector{-1, 1}, 0, {0}, Side::Interior);
  const siac::SymmetricFilter filter(spec);
  const auto field = two_indicator_field();
  const auto [lo, hi] = filter.region(field.mesh);
  CHECK(lo == 1.0);
  CHECK(hi == 6.0);
  for (int i = 0; i <= 30; ++i) {
    const double x = 2.0 + 3.0 * i / 30.0;
    const double expected = 0.5 * siac::eval_unit_bspline(KnotVector{2, 3, 4}, 1, x) +
                            0.5 * siac::eval_unit_bspline(KnotVector{3, 4, 5}, 1, x);
    CHECK(filter(field, x) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("exact reproduction of polynomial data") {
  std::mt19937 rng(3);
  for (int d = 1; d <= 2; ++d) {
    for (const auto& spec : boundary_specs(d)) {
      CAPTURE(spec.name());
      CAPTURE(to_string(spec.side));
      const int elements = siac::window_elements(spec);
      const Rational origin = spec.side == Side::Left ? Rational(0) : Rational(-elements);
      for (int delta = 0; delta <= spec.reproduction_degree; ++delta) {
        std::vector<Rational> c(delta + 1);
        for (auto& v : c) v = oracle::random_rational(rng, 9, 5);
        if (c.back().is_zero()) c.back() = 1;
        const RatPoly p(c);
        const int degree = std::max(d, delta);
        const siac::BoundaryFilter filter(spec, degree);
        const RatPoly out = filter.apply_exact(siac::bernstein_window(p, degree, origin, elements));
        // boundary at 0 in mesh units, so x = anchor_offset + xi
        CHECK(out == p.compose_affine(Rational(1), spec.anchor_offset()));
      }
    }
  }
}

TEST_CASE("float reproduction of polynomial data") {
  std::mt19937 rng(8);
  for (int d = 1; d <= 2; ++d) {
    for (const auto& spec : boundary_specs(d)) {
      CAPTURE(spec.name());
      const int N = siac::window_elements(spec) + 3;
      for (int delta = 0; delta <= spec.reproduction_degree; delta += std::max(1, spec.reproduction_degree / 3)) {
        std::vector<Rational> c(delta + 1);
        for (auto& v : c) v = oracle::random_rational(rng, 9, 5);
        const RatPoly p(c);
        const int degree = std::max(d, delta);
        const auto field = polynomial_field(p, degree, N);
        const auto bp = siac::filter_boundary(field, spec);
        for (int i = 0; i <= 12; ++i) {
          const double x = bp.lo + (bp.hi - bp.lo) * i / 12.0;
          CHECK(bp(x) == doctest::Approx(p.eval(x)).epsilon(1e-11).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("Legendre and Bernstein fields give the same boundary polynomial") {
  const auto spec = siac::build_spec(Family::NPk, 2, Side::Right, 0);
  const auto bern = random_field(2, Mesh(0.0, 2.0, 12), 21);
  const auto leg = siac::to_legendre(bern);
  const auto a = siac::filter_boundary(bern, spec);
  const auto b = siac::filter_boundary(leg, spec);
  for (std::size_t m = 0; m < a.coeffs.size(); ++m) CHECK(a.coeffs[m] == doctest::Approx(b.coeffs[m]).epsilon(1e-12));
}

TEST_CASE("boundary filter errors") {
  const auto np0 = siac::build_spec(Family::NPk, 3, Side::Left, 0);
  CHECK_THROWS_AS(siac::filter_boundary(random_field(3, Mesh(0.0, 1.0, 5), 1), np0), siac::MeshTooCoarse);
  const siac::BoundaryFilter filter(np0, 3);
  CHECK_THROWS_AS(filter.apply(random_field(2, Mesh(0.0, 1.0, 20), 1)), siac::DimensionMismatch);
  CHECK_THROWS_AS(filter.apply_exact({1, 2, 3}), siac::DimensionMismatch);
  CHECK(filter.first_element(20) == 0);
  CHECK(siac::BoundaryFilter(siac::mirrored(np0), 3).first_element(20) == 10);
}

TEST_CASE("mirrored data with the opposite-side filter mirrors the polynomial") {
  for (Family f : {Family::NPk, Family::RLKV, Family::SRV}) {
    const int d = 2;
    const auto left = siac::build_spec(f, d, Side::Left);
    const auto right = siac::build_spec(f, d, Side::Right);
    const Mesh mesh(0.0, 1.0, 30);
    const auto u = random_field(d, mesh, 77);
    DGField v(d, mesh, Basis::Bernstein);
    for (int e = 0; e < mesh.N; ++e)
      for (int l = 0; l <= d; ++l) v.coeff(e, l) = u.coeff(mesh.N - 1 - e, d - l);
    const auto pl = siac::filter_boundary(u, left);
    const auto pr = siac::filter_boundary(v, right);
    REQUIRE(pl.coeffs.size() == pr.coeffs.size());
    for (std::size_t k = 0; k < pl.coeffs.size(); ++k)
      CHECK(pr.coeffs[k] == doctest::Approx((k % 2 == 0 ? 1 : -1) * pl.coeffs[k]).epsilon(1e-10).scale(1.0));
    for (double x : {0.0, 0.03, 0.1}) CHECK(pr(1.0 - x) == doctest::Approx(pl(x)).epsilon(1e-10));
  }
}

TEST_CASE("boundary polynomial derivative scaling") {
  siac::BoundaryPolynomial p;
  p.h = 0.5;
  p.anchor = 1.0;
  p.coeffs = {1.0, 2.0, 3.0};  // 1 + 2 xi + 3 xi^2, xi = (x - 1)/0.5
  const auto d1 = p.derivative(1);
  CHECK(d1.coeffs == std::vector<double>{4.0, 12.0});
  CHECK(d1.derivative_order == 1);
  CHECK(p.derivative(2).coeffs == std::vector<double>{24.0});
  CHECK(p.physical_coefficients() == std::vector<double>{1.0, 4.0, 12.0});
  for (double x : {0.7, 1.2}) {
    const double fd = (p(x + 1e-5) - p(x - 1e-5)) / 2e-5;
    CHECK(d1(x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("reference convolution agrees with the boundary polynomial") {
  const auto problem = siac::make_test_problem(1);
  const Mesh mesh(problem.a, problem.b, 20);
  const auto field = siac::dg_solve(problem, mesh, 1, 0.2);
  for (const auto& spec : {siac::build_spec(Family::NPk, 1, Side::Left, 0), siac::build_spec(Family::NPk, 1, Side::Right, 0),
                           siac::build_spec(Family::RLKV, 1, Side::Left), siac::build_spec(Family::SRV, 1, Side::Right)}) {
    const auto bp = siac::filter_boundary(field, spec);
    for (int i = 0; i < 50; ++i) {
      const double x = bp.lo + (bp.hi - bp.lo) * i / 49.0;
      const double ref = siac::reference_convolve(siac::kernel_at(spec, mesh, x), field, x);
      CHECK(bp(x) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("filtered output over the boundary region is one polynomial") {
  const auto spec = siac::build_spec(Family::NPk, 1, Side::Left, 0);
  const Mesh mesh(0.0, 1.0, 16);
  const auto field = random_field(1, mesh, 5);
  const auto width = spec.region_width.to_double() * mesh.h();
  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    const double x = width * (i + 0.25) / 20.0;
    xs.push_back(x);
    ys.push_back(siac::reference_convolve(siac::kernel_at(spec, mesh, x), field, x));
  }
  const int r = spec.reproduction_degree;
  std::vector<double> px, py;
  for (int i = 0; i <= r; ++i) {
    px.push_back(xs[i * 5]);
    py.push_back(ys[i * 5]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(oracle::newton_interpolate(px, py, xs[i]) == doctest::Approx(ys[i]).epsilon(1e-9));
}

TEST_CASE("symmetric filter") {
  const auto spec = siac::build_spec(Family::Symmetric, 2, Side::Interior);
  const Mesh mesh(-1.0, 2.0, 24);
  const auto field = siac::l2_project([](double x) { return x * x; }, mesh, 2);
  const siac::SymmetricFilter filter(spec);
  const auto [lo, hi] = filter.region(mesh);
  CHECK(lo == doctest::Approx(-1.0 + 3.5 * mesh.h()));
  CHECK(hi == doctest::Approx(2.0 - 3.5 * mesh.h()));
  for (int i = 0; i <= 40; ++i) {
    const double x = lo + (hi - lo) * i / 40.0;
    CHECK(filter(field, x) == doctest::Approx(x * x).epsilon(1e-12).scale(1.0));
    CHECK(siac::reference_convolve(siac::kernel_at(spec, mesh, x), field, x) ==
          doctest::Approx(filter(field, x)).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(filter(field, -1.0), siac::OutsideInteriorRegion);
  CHECK_THROWS_AS(filter(field, hi + mesh.h()), siac::OutsideInteriorRegion);

  const auto one = siac::l2_project([](double) { return 1.0; }, mesh, 1);
  const auto sym1 = siac::build_spec(Family::Symmetric, 1, Side::Interior);
  CHECK(siac::symmetric_filter_eval(one, sym1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reference convolution basics") {
  const Mesh mesh(0.0, 4.0, 4);
  const auto one = siac::l2_project([](double) { return 1.0; }, mesh, 0);
  siac::WeightedKernel box;
  box.coefficients = {1.0};
  box.windows = {{-1.0, 1.0}};
  box.degrees = {0};
  CHECK(siac::reference_convolve(box, one, 2.0) == doctest::Approx(1.0));
  CHECK(siac::reference_convolve(box, one, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(siac::reference_convolve(box, one, 0.5), siac::WindowOutOfDomain);
}

TEST_CASE("blend weights") {
  for (int rho = 1; rho <= 3; ++rho) {
    CHECK(siac::blend_weight(0.0, rho, BlendProfile::Hermite) == doctest::Approx(0.0));
    CHECK(siac::blend_weight(1.0, rho, BlendProfile::Hermite) == doctest::Approx(1.0));
    for (int k = 1; k <= rho; ++k) {
      CHECK(siac::blend_weight(0.0, rho, BlendProfile::Hermite, k) == doctest::Approx(0.0).scale(1.0));
      CHECK(siac::blend_weight(1.0, rho, BlendProfile::Hermite, k) == doctest::Approx(0.0).scale(1.0));
    }
    // symmetric about z = 1/2
    CHECK(siac::blend_weight(0.5, rho, BlendProfile::Hermite) == doctest::Approx(0.5));
    CHECK(siac::blend_weight(0.3, rho, BlendProfile::Hermite) ==
          doctest::Approx(1.0 - siac::blend_weight(0.7, rho, BlendProfile::Hermite)));
  }
  CHECK(siac::blend_weight(0.5, 1, BlendProfile::Literal) == doctest::Approx(0.25));
  CHECK(siac::blend_weight(0.3, 1, BlendProfile::Literal) == doctest::Approx(0.09));
  CHECK(siac::blend_weight(1.0, 1, BlendProfile::Literal, 1) == doctest::Approx(2.0));
  CHECK(siac::blend_weight(0.0, 2, BlendProfile::Literal, 2) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS(siac::blend_weight(0.5, 0, BlendProfile::Hermite));
}

TEST_CASE("blended evaluator") {
  siac::BoundaryPolynomial boundary;
  boundary.h = 1.0;
  boundary.coeffs = {1.0};
  const auto interior = [](double) { return 3.0; };
  const auto blend = siac::blend_transition(boundary, interior, 0.0, 2.0, 1, BlendProfile::Literal);
  CHECK(blend(-1.0) == 1.0);
  CHECK(blend(0.0) == 1.0);
  CHECK(blend(1.0) == doctest::Approx(0.75 * 1.0 + 0.25 * 3.0));
  CHECK(blend(2.0) == 3.0);
  CHECK(blend(5.0) == 3.0);
  // right-hand overlap runs backwards
  const auto right = siac::blend_transition(boundary, interior, 2.0, 0.0, 2);
  CHECK(right(2.5) == 1.0);
  CHECK(right(-0.5) == 3.0);
  CHECK(right(1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(siac::blend_transition(boundary, interior, 1.0, 1.0), siac::EmptyOverlap);
}
