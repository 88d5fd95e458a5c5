#include "siac/spline.hpp"

#include <algorithm>
#include <cmath>

#include "siac/errors.hpp"

namespace siac {

KnotVector::KnotVector(std::vector<Rational> knots) : knots_(std::move(knots)) {
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (knots_[i] < knots_[i - 1]) throw InvalidArgument("knots must be nondecreasing");
}

KnotVector::KnotVector(std::initializer_list<long> knots) {
  std::vector<Rational> v;
  for (long k : knots) v.emplace_back(k);
  *this = KnotVector(std::move(v));
}

KnotVector KnotVector::shifted(const Rational& offset) const {
  std::vector<Rational> out;
  out.reserve(knots_.size());
  for (const auto& t : knots_) out.push_back(t + offset);
  return KnotVector(std::move(out));
}

KnotVector KnotVector::reflected() const {
  std::vector<Rational> out;
  out.reserve(knots_.size());
  for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) out.push_back(-*it);
  return KnotVector(std::move(out));
}

KnotVector KnotVector::scaled(const Rational& factor) const {
  if (factor.sign() <= 0) throw InvalidArgument("knot scale must be positive");
  std::vector<Rational> out;
  out.reserve(knots_.size());
  for (const auto& t : knots_) out.push_back(t * factor);
  return KnotVector(std::move(out));
}

std::vector<double> KnotVector::to_double() const {
  std::vector<double> out;
  out.reserve(knots_.size());
  for (const auto& t : knots_) out.push_back(t.to_double());
  return out;
}

namespace {

void check_window(std::size_t count, int k, bool degenerate) {
  if (k < 0) throw InvalidArgument("negative B-spline degree");
  if (count != static_cast<std::size_t>(k) + 2)
    throw InvalidArgument("a degree-k B-spline needs exactly k+2 knots");
  if (degenerate) throw DegenerateSupport("first and last knot coincide");
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

double eval_unit_bspline(std::span<const double> t, int k, double x) {
  check_window(t.size(), k, t.empty() || !(t.back() > t.front()));
  const double lo = t.front();
  const double hi = t.back();
  if (x < lo || x > hi) return 0.0;

  // Locate the knot span; at the right end use the last nonempty span so the
  // value is the left limit.
  const std::size_t n = t.size();
  std::size_t span = 0;
  if (x >= hi) {
    span = n - 2;
    while (span > 0 && !(t[span + 1] > t[span])) --span;
  } else {
    while (span + 1 < n - 1 && t[span + 1] <= x) ++span;
  }

  // N_{i,0} on the located span, then raise the degree.
  std::vector<double> basis(n - 1, 0.0);
  basis[span] = 1.0;
  for (int p = 1; p <= k; ++p) {
    for (std::size_t i = 0; i + p + 1 < n; ++i) {
      double v = 0.0;
      const double left = t[i + p] - t[i];
      const double right = t[i + p + 1] - t[i + 1];
      if (left > 0.0) v += (x - t[i]) / left * basis[i];
      if (right > 0.0) v += (t[i + p + 1] - x) / right * basis[i + 1];
      basis[i] = v;
    }
  }
  return basis[0] * (k + 1) / (hi - lo);
}

double eval_unit_bspline(const KnotVector& knots, int k, double x) {
  const auto t = knots.to_double();
  return eval_unit_bspline(std::span<const double>(t), k, x);
}

// ---------------------------------------------------------------------------
// Exact piecewise form

Rational PiecewisePolynomial::operator()(const Rational& x) const {
  if (breakpoints.empty() || x < breakpoints.front() || x > breakpoints.back()) return Rational(0);
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  std::size_t piece = static_cast<std::size_t>(it - breakpoints.begin());
  piece = piece == 0 ? 0 : piece - 1;
  if (piece >= pieces.size()) piece = pieces.size() - 1;
  return pieces[piece](x);
}

double PiecewisePolynomial::eval(double x) const {
  if (breakpoints.empty()) return 0.0;
  if (x < breakpoints.front().to_double() || x > breakpoints.back().to_double()) return 0.0;
  std::size_t piece = 0;
  while (piece + 1 < pieces.size() && breakpoints[piece + 1].to_double() <= x) ++piece;
  return pieces[piece].eval(x);
}

Rational PiecewisePolynomial::integral() const { return moment(0); }

Rational PiecewisePolynomial::moment(unsigned m, const Rational& shift) const {
  Rational acc(0);
  const RatPoly power = RatPoly({Rational(0), Rational(1)}, shift);
  RatPoly weight = RatPoly::constant(Rational(1));
  for (unsigned i = 0; i < m; ++i) weight = weight * power;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    acc += (pieces[i] * weight).integral(breakpoints[i], breakpoints[i + 1]);
  return acc;
}

PiecewisePolynomial unit_bspline_piecewise(const KnotVector& knots, int k) {
  check_window(knots.size(), k, knots.size() < 2 || knots.back() == knots.front());
  const auto& t = knots.knots();
  const std::size_t n = t.size();

  PiecewisePolynomial out;
  const Rational scale = Rational(k + 1) / (t.back() - t.front());
  for (std::size_t span = 0; span + 1 < n; ++span) {
    if (t[span + 1] == t[span]) continue;
    // Symbolic Cox-de Boor restricted to this span.
    std::vector<RatPoly> basis(n - 1, RatPoly::constant(Rational(0)));
    basis[span] = RatPoly::constant(Rational(1));
    for (int p = 1; p <= k; ++p) {
      for (std::size_t i = 0; i + p + 1 < n; ++i) {
        RatPoly v = RatPoly::constant(Rational(0));
        const Rational left = t[i + p] - t[i];
        const Rational right = t[i + p + 1] - t[i + 1];
        if (!left.is_zero()) v = v + (Rational(1) / left) * (RatPoly({-t[i], Rational(1)}) * basis[i]);
        if (!right.is_zero())
          v = v + (Rational(1) / right) * (RatPoly({t[i + p + 1], Rational(-1)}) * basis[i + 1]);
        basis[i] = v;
      }
    }
    if (out.breakpoints.empty()) out.breakpoints.push_back(t[span]);
    out.breakpoints.push_back(t[span + 1]);
    out.pieces.push_back(scale * basis[0]);
  }
  return out;
}

Rational complete_homogeneous(std::span<const Rational> values, unsigned m) {
  // h[j] after processing variables x_0..x_i holds h_j(x_0..x_i);
  // h_j(x_0..x_i) = h_j(x_0..x_{i-1}) + x_i h_{j-1}(x_0..x_i).
  std::vector<Rational> h(m + 1, Rational(0));
  h[0] = Rational(1);
  for (const auto& x : values)
    for (unsigned j = 1; j <= m; ++j) h[j] += x * h[j - 1];
  return h[m];
}

Rational bspline_moment(const KnotVector& knots, int k, unsigned m) {
  check_window(knots.size(), k, knots.size() < 2 || knots.back() == knots.front());
  return complete_homogeneous(knots.knots(), m) / binomial(static_cast<long>(m) + k + 1, m);
}

// ---------------------------------------------------------------------------
// Bernstein

double bernstein_basis(int d, int i, int l, double x, double h, double origin) {
  if (d < 0 || l < 0 || l > d) throw InvalidArgument("Bernstein index out of range");
  if (!(h > 0.0)) throw InvalidArgument("mesh width must be positive");
  const double lo = origin + i * h;
  const double hi = lo + h;
  if (x < lo || x > hi) return 0.0;
  const double u = (x - lo) / h;
  const double v = (hi - x) / h;
  double binom = 1.0;
  for (int j = 1; j <= l; ++j) binom = binom * (d - l + j) / j;
  return binom * std::pow(u, l) * std::pow(v, d - l);
}

RatPoly bernstein_unit_poly(int d, int l) {
  if (d < 0 || l < 0 || l > d) throw InvalidArgument("Bernstein index out of range");
  RatPoly p = RatPoly::constant(binomial(d, l));
  const RatPoly z = RatPoly::identity();
  const RatPoly one_minus_z({Rational(1), Rational(-1)});
  for (int j = 0; j < l; ++j) p = p * z;
  for (int j = 0; j < d - l; ++j) p = p * one_minus_z;
  return p;
}

}  // namespace siac
