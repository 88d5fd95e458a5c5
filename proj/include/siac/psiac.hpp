#pragma once

// Position-dependent boundary filtering and interior symmetric filtering of
// DG output.
//
// Filtered value at x:  F(x) = int K_x(s) u(x - s) ds  with
//   K_x(s) = sum_j c_j(xi) B(s | h (w_j + xi)),   xi = (x - anchor) / h.
// The anchor is a + t_n h for left kernels and b + t_0 h for right kernels,
// so the data window stays fixed against the boundary while x moves. Over the
// boundary region F is the single polynomial
//   F(x) = u_I^T Q [xi^0 .. xi^r],   Q = T A C,
// with T the window/basis integrals, A the column reversal and C the shifted
// coefficient matrix.

#include <functional>
#include <vector>

#include "siac/dg.hpp"
#include "siac/exact.hpp"
#include "siac/filters.hpp"

namespace siac {

/// Number of elements covered by a boundary kernel's data window.
int window_elements(const FilterSpec& spec);

/// Exact T: rows (element e, Bernstein index l) of the window in ascending
/// element order, columns j' = 0..r holding B-spline r - j' reflected about
/// the anchor. Entry = int phi_{e,l}(y) B(y | anchor - reversed window) dy in
/// mesh units; independent of h. `data_degree` is the Bernstein degree of the data.
RatMatrix t_matrix(const FilterSpec& spec, int data_degree);
/// Closed form for piecewise-constant consecutive kernels: I (x) 1/(d+1).
RatMatrix np0_t_matrix(const FilterSpec& spec, int data_degree);
RatMatrix reversal_matrix(std::size_t n);
/// Q = T A C (exact).
RatMatrix q_matrix(const FilterSpec& spec, int data_degree);
/// Q [xi^0 .. xi^r]: the weights applied to the window's DG coefficients at shift xi.
std::vector<Rational> endpoint_vector(const RatMatrix& q, const Rational& xi);

/// Filtered output over a boundary region, as a polynomial in
/// xi = (x - anchor) / h.
struct BoundaryPolynomial {
  Side side = Side::Left;
  double h = 1.0;
  double anchor = 0.0;  // physical position of xi = 0
  double lo = 0.0;      // boundary region
  double hi = 0.0;
  std::vector<double> coeffs;  // in powers of xi; derivatives carry their h^-l factor
  int derivative_order = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double x) const;
  /// l-th x-derivative: d_m = c_{m+l} (m+l)!/m! h^-l.
  BoundaryPolynomial derivative(int order) const;
  /// Coefficients in powers of (x - anchor): a_k = c_k / h^k.
  std::vector<double> physical_coefficients() const;
};

/// Precomputed boundary filter for one spec and one data degree.
class BoundaryFilter {
 public:
  BoundaryFilter(FilterSpec spec, int data_degree);

  const FilterSpec& spec() const { return spec_; }
  int data_degree() const { return data_degree_; }
  int elements() const { return elements_; }
  const RatMatrix& q_exact() const { return q_exact_; }

  /// Float path: contracts the field's window coefficients with Q.
  BoundaryPolynomial apply(const DGField& field) const;
  /// Exact path: `window` holds Bernstein coefficients of the window elements
  /// (ascending element order, d+1 per element). Returns the polynomial in xi.
  RatPoly apply_exact(const std::vector<Rational>& window) const;
  /// First element of the window within a mesh of N elements.
  int first_element(int N) const;

 private:
  FilterSpec spec_;
  int data_degree_;
  int elements_;
  RatMatrix q_exact_;
  std::vector<double> q_;  // row-major snapshot
};

BoundaryPolynomial filter_boundary(const DGField& field, const FilterSpec& spec);
BoundaryPolynomial filter_boundary_derivative(const DGField& field, const FilterSpec& spec, int order);

/// Exact Bernstein coefficients of p (a polynomial in mesh units) on the
/// elements [origin + e, origin + e + 1], e = 0..elements-1.
std::vector<Rational> bernstein_window(const RatPoly& p, int degree, const Rational& origin, int elements);

/// Position-independent filter K(s) = sum_j c_j B(s | w_j), applied by exact
/// piecewise integration against the local polynomials (Gauss rules sized to
/// integrate each kernel piece times data piece without error).
class SymmetricFilter {
 public:
  explicit SymmetricFilter(FilterSpec spec);

  const FilterSpec& spec() const { return spec_; }
  const PiecewisePolynomial& kernel() const { return kernel_; }
  /// Admissible evaluation interval [a + t_n h, b + t_0 h] of the mesh.
  std::pair<double, double> region(const Mesh& mesh) const;
  double operator()(const DGField& field, double x) const;

 private:
  FilterSpec spec_;
  PiecewisePolynomial kernel_;
  std::vector<double> breaks_;
  std::vector<std::vector<double>> pieces_;  // about breaks_[i], ascending powers
  int kernel_degree_;
};

double symmetric_filter_eval(const DGField& field, const FilterSpec& spec, double x);

/// Kernel sum_j c_j B(s | knots_j) in physical coordinates.
struct WeightedKernel {
  std::vector<double> coefficients;
  std::vector<std::vector<double>> windows;
  std::vector<int> degrees;
};

/// Kernel of `spec` used at x. Boundary kernels are rebuilt by solving the
/// moment system at the explicit shift; interior kernels use xi = 0.
WeightedKernel kernel_at(const FilterSpec& spec, const Mesh& mesh, double x);

/// Convolution by composite Gauss quadrature over the merged breakpoints of
/// kernel and mesh, with B-splines evaluated by Cox-de Boor recursion.
double reference_convolve(const WeightedKernel& kernel, const DGField& field, double x);

enum class BlendProfile {
  Hermite,  // degree 2 rho + 1: value and rho derivatives match at both ends
  Literal,  // degree 2 rho
};

/// Bernstein weight beta(z) = sum_{i > rho} b_i^n(z) and its derivatives.
double blend_weight(double z, int rho, BlendProfile profile, int derivative = 0);

/// u*(x) = (1 - beta) boundary(x) + beta interior(x) on the overlap between
/// a1 (boundary side, beta = 0) and a2 (interior side, beta = 1); a1 > a2 is
/// allowed for right boundaries. Outside the overlap the nearer side is used.
class BlendedEvaluator {
 public:
  BlendedEvaluator(BoundaryPolynomial boundary, std::function<double(double)> interior, double a1, double a2,
                   int rho = 2, BlendProfile profile = BlendProfile::Hermite);

  double operator()(double x) const;
  double a1() const { return a1_; }
  double a2() const { return a2_; }
  int rho() const { return rho_; }

 private:
  BoundaryPolynomial boundary_;
  std::function<double(double)> interior_;
  double a1_;
  double a2_;
  int rho_;
  BlendProfile profile_;
};

BlendedEvaluator blend_transition(const BoundaryPolynomial& boundary, std::function<double(double)> interior,
                                  double a1, double a2, int rho = 2, BlendProfile profile = BlendProfile::Hermite);

}  // namespace siac
