#pragma once

// Filter families: knot and index structure, reproduction matrices and the
// exact (shift-dependent) B-spline coefficients of each kernel.
//
// All positions are in mesh units. A kernel is a linear combination
//   K(s) = sum_j c_j B(s | w_j)
// of unit-integral B-splines over prototype windows w_j. It reproduces
// polynomials of degree <= r when its moments satisfy
//   int K = 1,  int K(s) s^m ds = 0  for 1 <= m <= r.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siac/exact.hpp"
#include "siac/spline.hpp"

namespace siac {

enum class Family { Symmetric, RS, SRV, RLKV, NPk };
enum class Side { Left, Right, Interior };

std::string to_string(Family family);
std::string to_string(Side side);
/// Accepts "symmetric", "RS", "SRV", "RLKV", "NP0", "NP1", ... (case-insensitive).
/// For NPk families the kernel degree is written to *npk_degree when given.
Family parse_family(std::string_view text, int* npk_degree = nullptr);
Side parse_side(std::string_view text);

/// One B-spline of a kernel: degree and its k+2 prototype knots.
struct SplineTerm {
  int degree = 0;
  KnotVector window;
};

struct FilterSpec {
  Family family = Family::Symmetric;
  int npk_degree = 0;  // kernel degree of the NPk family
  int dg_degree = 1;
  Side side = Side::Interior;
  std::string label;  // overrides name() for hand-built specs

  KnotVector knots;             // prototype knot sequence t_0..t_n
  std::vector<int> index_set;   // J: start index of each B-spline window in `knots`
  std::vector<SplineTerm> splines;  // one per entry of J, in J order
  int reproduction_degree = 0;  // r, with |J| = r + 1
  Rational mu;                  // half support of the centred kernel
  Rational region_width;        // lambda: boundary-region width

  std::size_t size() const { return splines.size(); }
  /// Common kernel degree, or nullopt for mixed-degree kernels (RLKV).
  std::optional<int> uniform_degree() const;
  std::string name() const;
  /// Kernel offset that keeps the data window flush with the boundary:
  /// t_n for left kernels, t_0 for right kernels, 0 for interior kernels.
  Rational anchor_offset() const;
  /// Support width t_n - t_0.
  Rational support_width() const { return knots.back() - knots.front(); }
};

/// Derived spec of a shipped family. `npk_degree` only matters for NPk.
/// RLKV adds one degree-d B-spline over (mu-1, mu, ..., mu) with mu repeated
/// d+1 times (mirrored on the right) to the symmetric kernel's splines.
FilterSpec build_spec(Family family, int d, Side side, int npk_degree = 0);

/// RLKV with an explicit degree for the extra boundary B-spline.
FilterSpec build_rlkv_spec(int d, Side side, int extra_degree);

/// Spec from an explicit knot sequence and consecutive-or-not index set, all
/// B-splines sharing `degree`. The region width defaults to the support width.
FilterSpec make_custom_spec(const KnotVector& knots, int degree, std::vector<int> index_set, Side side,
                            std::optional<Rational> region_width = std::nullopt);

/// Mirror image s -> -s of a spec (left <-> right).
FilterSpec mirrored(const FilterSpec& spec);

/// Raw moment matrix M[m][j] = int B(s|w_j) s^m ds, m = 0..r.
RatMatrix reproduction_matrix(const FilterSpec& spec);
/// Power-sum form M[m][j] = h_m(w_j); needs a uniform kernel degree.
/// Equals the moment form with row m scaled by C(m+k+1, m).
RatMatrix power_sum_matrix(const FilterSpec& spec);
/// Closed form for piecewise-constant kernels:
///   M[m][j] = (t_{j+1}^{m+1} - t_j^{m+1}) / (t_{j+1} - t_j).
RatMatrix least_degree_matrix(const FilterSpec& spec);

/// Coefficients c with M c = e_0.
std::vector<Rational> static_coefficients(const FilterSpec& spec);

/// Coefficients of the kernel over windows w_j + xi, as polynomials in xi:
///   c_j(xi) = sum_m C(j, m) xi^m.
struct CoefficientPolynomials {
  RatMatrix matrix;  // (r+1) x (r+1)

  std::vector<Rational> at(const Rational& xi) const;
  std::vector<double> at(double xi) const;
  RatPoly poly(std::size_t j) const;
};

/// Generic route, valid for mixed degrees: C = M^{-1} diag((-1)^m).
CoefficientPolynomials shifted_coefficient_polynomials(const FilterSpec& spec);
/// Closed form for a uniform kernel degree k:
///   C = M_ps^{-1} diag((-1)^m C(m+k+1, m)).
CoefficientPolynomials shifted_coefficient_polynomials_power_form(const FilterSpec& spec);
/// Re-solves the moment system for the explicitly shifted windows w_j + xi.
std::vector<Rational> coefficients_for_shift(const FilterSpec& spec, const Rational& xi);

/// Exact kernel sum_j c_j B(.|w_j + xi) as a piecewise polynomial.
PiecewisePolynomial kernel_piecewise(const FilterSpec& spec, const std::vector<Rational>& coefficients,
                                     const Rational& xi = Rational(0));

}  // namespace siac
