#pragma once

// B-spline and Bernstein-Bezier primitives.
//
// B-splines here are unit-integral: B(x|t) = (k+1)/(t_{k+1} - t_0) * N(x|t)
// where N is the Cox-de Boor B-spline. N itself is only used internally.

#include <span>
#include <vector>

#include "siac/exact.hpp"

namespace siac {

/// Nondecreasing rational knots t_0 <= ... <= t_q.
class KnotVector {
 public:
  KnotVector() = default;
  explicit KnotVector(std::vector<Rational> knots);
  KnotVector(std::initializer_list<long> knots);

  const std::vector<Rational>& knots() const { return knots_; }
  std::size_t size() const { return knots_.size(); }
  const Rational& operator[](std::size_t i) const { return knots_[i]; }
  const Rational& front() const { return knots_.front(); }
  const Rational& back() const { return knots_.back(); }

  KnotVector shifted(const Rational& offset) const;
  /// Knots of s -> B(-s): negated and reversed.
  KnotVector reflected() const;
  KnotVector scaled(const Rational& factor) const;
  std::vector<double> to_double() const;

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

 private:
  std::vector<Rational> knots_;
};

/// Piecewise polynomial, zero outside [breakpoints.front(), breakpoints.back()].
struct PiecewisePolynomial {
  std::vector<Rational> breakpoints;  // strictly increasing
  std::vector<RatPoly> pieces;        // pieces[i] lives on [breakpoints[i], breakpoints[i+1]]

  /// Right-continuous evaluation; the last breakpoint takes the left limit.
  Rational operator()(const Rational& x) const;
  double eval(double x) const;
  Rational integral() const;
  /// Exact integral of this function times (s - shift)^m.
  Rational moment(unsigned m, const Rational& shift = Rational(0)) const;
};

/// Unit-integral B-spline of degree k evaluated by Cox-de Boor recursion.
/// `knots` must hold exactly k+2 values with t_{k+1} > t_0.
double eval_unit_bspline(std::span<const double> knots, int k, double x);
double eval_unit_bspline(const KnotVector& knots, int k, double x);

/// Exact piecewise-polynomial form of the unit-integral B-spline.
PiecewisePolynomial unit_bspline_piecewise(const KnotVector& knots, int k);

/// Exact moment  int B(s|t) s^m ds = h_m(t_0..t_{k+1}) / C(m+k+1, m), where
/// h_m is the complete homogeneous symmetric polynomial of degree m.
Rational bspline_moment(const KnotVector& knots, int k, unsigned m);

/// Sum over all monomials of total degree m in the knots: h_m(t_0..t_{k+1}).
Rational complete_homogeneous(std::span<const Rational> values, unsigned m);

/// Scale-invariant Bernstein-Bezier basis function of degree d on the
/// interval [origin + i*h, origin + (i+1)*h]:
///   C(d,l) ((x - s_i)/h)^l ((s_{i+1} - x)/h)^(d-l),  zero elsewhere.
/// Its integral over the interval is h/(d+1).
double bernstein_basis(int d, int i, int l, double x, double h, double origin = 0.0);

/// Bernstein polynomial of degree d on the unit interval, exact, as a RatPoly in z.
RatPoly bernstein_unit_poly(int d, int l);

}  // namespace siac
