#pragma once

// Discontinuous-Galerkin solver for
//   u_t + (kappa(x,t) u)_x = rho(x,t)   on [a, b]
// with an upwind flux (kappa > 0), periodic or Dirichlet-inflow boundary
// conditions and classical RK4 time stepping.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "siac/exact.hpp"

namespace siac {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int points);

/// Legendre polynomial P_n and its derivative at z in [-1, 1].
double legendre(int n, double z);
double legendre_derivative(int n, double z);

struct Mesh {
  double a = 0.0;
  double b = 1.0;
  int N = 1;

  Mesh() = default;
  Mesh(double a, double b, int N);
  double h() const { return (b - a) / N; }
  double breakpoint(int i) const;
  /// Element containing x; interior breakpoints belong to the element on their right.
  int element_of(double x) const;
};

enum class Basis { Legendre, Bernstein };

/// Element-wise polynomial field. On element e with local z = (x - x_e)/h,
///   Legendre:  u = sum_l c_l P_l(2z - 1)
///   Bernstein: u = sum_l c_l C(d,l) z^l (1-z)^(d-l)
struct DGField {
  int d = 0;
  Mesh mesh;
  Basis basis = Basis::Legendre;
  std::vector<double> coeffs;  // element-major, N * (d+1)
  double time = 0.0;

  DGField() = default;
  DGField(int d, const Mesh& mesh, Basis basis = Basis::Legendre);

  double& coeff(int e, int l) { return coeffs[static_cast<std::size_t>(e) * (d + 1) + l]; }
  double coeff(int e, int l) const { return coeffs[static_cast<std::size_t>(e) * (d + 1) + l]; }
  std::span<const double> element(int e) const;

  /// Value of element e's polynomial at x (x need not lie in the element).
  double eval_element(int e, double x) const;
  double operator()(double x) const { return eval_element(mesh.element_of(x), x); }
};

/// Exact change-of-basis matrix: bernstein = L2B * legendre, (d+1) x (d+1).
RatMatrix legendre_to_bernstein_matrix(int d);
RatMatrix bernstein_to_legendre_matrix(int d);

DGField to_bernstein(const DGField& field);
DGField to_legendre(const DGField& field);

enum class BoundaryCondition { Periodic, DirichletInflow };

struct TestProblem {
  int id = 0;
  std::string name;
  double a = 0.0;
  double b = 1.0;
  BoundaryCondition bc = BoundaryCondition::Periodic;
  std::function<double(double, double)> kappa;   // (x, t)
  std::function<double(double, double)> rho;     // (x, t)
  std::function<double(double)> u0;              // (x)
  std::function<double(double)> inflow;          // (t), Dirichlet value at x = a
  std::function<double(double, double)> exact;   // (x, t)
};

/// Shipped problems:
///   1: u_t + u_x = 0 on [0,1], periodic, u0 = sin(2 pi x)
///   2: u_t + u_x = 0 on [0,2 pi], u(0,t) = -sin t, u0 = sin x
///   3: kappa = 2 + sin(x+t), rho = cos(x-t) + sin(2x) on [0,2 pi], periodic, u = sin(x-t)
TestProblem make_test_problem(int id);

/// Element-wise L2 projection with d+2 Gauss points per element.
DGField l2_project(const std::function<double(double)>& f, const Mesh& mesh, int d);

/// Semi-discrete right-hand side dc/dt for a Legendre field.
std::vector<double> dg_rhs(const DGField& field, double t, const TestProblem& problem);

inline double default_cfl(int d) { return 0.1 / (2 * d + 1); }

/// Integrates from the projected initial condition to time T with RK4.
/// The step is cfl * h / max|kappa|, shortened so that T is reached in an
/// integer number of steps. Throws UnstableBlowup if a coefficient exceeds 1e10.
DGField dg_solve(const TestProblem& problem, const Mesh& mesh, int d, double T, double cfl);
inline DGField dg_solve(const TestProblem& problem, const Mesh& mesh, int d, double T) {
  return dg_solve(problem, mesh, d, T, default_cfl(d));
}

}  // namespace siac
