#include "siac/dg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "siac/errors.hpp"

namespace siac {

// ---------------------------------------------------------------------------
// Quadrature and Legendre polynomials

double legendre(int n, double z) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double z) {
  // P'_n = sum over k = n-1, n-3, ... of (2k+1) P_k.
  double acc = 0.0;
  for (int k = n - 1; k >= 0; k -= 2) acc += (2 * k + 1) * legendre(k, z);
  return acc;
}

GaussRule gauss_legendre(int points) {
  if (points < 1) throw InvalidArgument("Gauss rule needs at least one point");
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int i = 0; i < points; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const double dz = legendre(points, z) / legendre_derivative(points, z);
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre_derivative(points, z);
    rule.nodes[points - 1 - i] = z;
    rule.weights[points - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Mesh and fields

Mesh::Mesh(double a_, double b_, int N_) : a(a_), b(b_), N(N_) {
  if (N < 1) throw InvalidArgument("mesh needs at least one element");
  if (!(b > a)) throw InvalidArgument("mesh needs a < b");
}

double Mesh::breakpoint(int i) const { return i == N ? b : a + i * h(); }

int Mesh::element_of(double x) const {
  const int e = static_cast<int>(std::floor((x - a) / h()));
  return std::clamp(e, 0, N - 1);
}

DGField::DGField(int d_, const Mesh& mesh_, Basis basis_) : d(d_), mesh(mesh_), basis(basis_) {
  if (d < 0) throw InvalidArgument("negative DG degree");
  coeffs.assign(static_cast<std::size_t>(mesh.N) * (d + 1), 0.0);
}

std::span<const double> DGField::element(int e) const {
  return std::span<const double>(coeffs).subspan(static_cast<std::size_t>(e) * (d + 1), d + 1);
}

double DGField::eval_element(int e, double x) const {
  const double z = (x - mesh.breakpoint(e)) / mesh.h();
  const auto c = element(e);
  double acc = 0.0;
  if (basis == Basis::Legendre) {
    for (int l = 0; l <= d; ++l) acc += c[l] * legendre(l, 2.0 * z - 1.0);
  } else {
    double binom = 1.0;
    for (int l = 0; l <= d; ++l) {
      acc += c[l] * binom * std::pow(z, l) * std::pow(1.0 - z, d - l);
      binom = binom * (d - l) / (l + 1);
    }
  }
  return acc;
}

RatMatrix legendre_to_bernstein_matrix(int d) {
  // P_n(2z-1) = sum_k (-1)^(n+k) C(n,k) C(n+k,k) z^k and
  // z^k = sum_{l>=k} C(l,k)/C(d,k) B_l^d(z).
  RatMatrix m(d + 1, d + 1);
  for (int n = 0; n <= d; ++n)
    for (int k = 0; k <= n; ++k) {
      Rational mono = binomial(n, k) * binomial(n + k, k);
      if ((n + k) % 2 != 0) mono = -mono;
      for (int l = k; l <= d; ++l) m(l, n) += mono * binomial(l, k) / binomial(d, k);
    }
  return m;
}

RatMatrix bernstein_to_legendre_matrix(int d) { return invert_exact(legendre_to_bernstein_matrix(d)); }

namespace {

DGField convert(const DGField& field, const RatMatrix& exact, Basis target) {
  const auto m = exact.to_double();
  DGField out(field.d, field.mesh, target);
  out.time = field.time;
  const int n = field.d + 1;
  for (int e = 0; e < field.mesh.N; ++e) {
    const auto c = field.element(e);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += m[i * n + j] * c[j];
      out.coeff(e, i) = acc;
    }
  }
  return out;
}

}  // namespace

DGField to_bernstein(const DGField& field) {
  if (field.basis == Basis::Bernstein) return field;
  return convert(field, legendre_to_bernstein_matrix(field.d), Basis::Bernstein);
}

DGField to_legendre(const DGField& field) {
  if (field.basis == Basis::Legendre) return field;
  return convert(field, bernstein_to_legendre_matrix(field.d), Basis::Legendre);
}

// ---------------------------------------------------------------------------
// Problems

TestProblem make_test_problem(int id) {
  using std::numbers::pi;
  TestProblem p;
  p.id = id;
  switch (id) {
    case 1:
      p.name = "constant speed, periodic";
      p.a = 0.0;
      p.b = 1.0;
      p.kappa = [](double, double) { return 1.0; };
      p.rho = [](double, double) { return 0.0; };
      p.u0 = [](double x) { return std::sin(2 * pi * x); };
      p.exact = [](double x, double t) { return std::sin(2 * pi * (x - t)); };
      return p;
    case 2:
      p.name = "constant speed, Dirichlet";
      p.a = 0.0;
      p.b = 2 * pi;
      p.bc = BoundaryCondition::DirichletInflow;
      p.kappa = [](double, double) { return 1.0; };
      p.rho = [](double, double) { return 0.0; };
      p.u0 = [](double x) { return std::sin(x); };
      p.inflow = [](double t) { return -std::sin(t); };
      p.exact = [](double x, double t) { return std::sin(x - t); };
      return p;
    case 3:
      p.name = "variable speed, periodic";
      p.a = 0.0;
      p.b = 2 * pi;
      p.kappa = [](double x, double t) { return 2.0 + std::sin(x + t); };
      p.rho = [](double x, double t) { return std::cos(x - t) + std::sin(2 * x); };
      p.u0 = [](double x) { return std::sin(x); };
      p.exact = [](double x, double t) { return std::sin(x - t); };
      return p;
    default:
      throw InvalidArgument("unknown test problem " + std::to_string(id));
  }
}

// ---------------------------------------------------------------------------
// Discretization

DGField l2_project(const std::function<double(double)>& f, const Mesh& mesh, int d) {
  DGField out(d, mesh, Basis::Legendre);
  const GaussRule rule = gauss_legendre(d + 2);
  const double h = mesh.h();
  for (int e = 0; e < mesh.N; ++e) {
    const double xe = mesh.breakpoint(e);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double z = rule.nodes[q];
      const double fx = f(xe + 0.5 * h * (z + 1.0));
      for (int l = 0; l <= d; ++l) out.coeff(e, l) += rule.weights[q] * fx * legendre(l, z);
    }
    for (int l = 0; l <= d; ++l) out.coeff(e, l) *= (2 * l + 1) / 2.0;
  }
  return out;
}

namespace {

struct VolumeTables {
  GaussRule rule;
  std::vector<double> p;   // p[q*(d+1)+l] = P_l(z_q)
  std::vector<double> dp;  // derivative
};

VolumeTables volume_tables(int d) {
  VolumeTables t;
  t.rule = gauss_legendre(std::max(2 * d + 2, d + 4));
  for (double z : t.rule.nodes)
    for (int l = 0; l <= d; ++l) {
      t.p.push_back(legendre(l, z));
      t.dp.push_back(legendre_derivative(l, z));
    }
  return t;
}

// Trace of element e at its right end: sum_l c_l P_l(1) = sum_l c_l.
double right_trace(const std::vector<double>& c, int e, int d) {
  double acc = 0.0;
  for (int l = 0; l <= d; ++l) acc += c[static_cast<std::size_t>(e) * (d + 1) + l];
  return acc;
}

void rhs_into(const std::vector<double>& c, const Mesh& mesh, int d, double t, const TestProblem& problem,
              const VolumeTables& tab, std::vector<double>& out) {
  const double h = mesh.h();
  const int n = d + 1;
  const std::size_t nq = tab.rule.nodes.size();
  out.assign(c.size(), 0.0);
  for (int e = 0; e < mesh.N; ++e) {
    const double xe = mesh.breakpoint(e);
    const double* ce = c.data() + static_cast<std::size_t>(e) * n;
    double* oe = out.data() + static_cast<std::size_t>(e) * n;
    for (std::size_t q = 0; q < nq; ++q) {
      const double x = xe + 0.5 * h * (tab.rule.nodes[q] + 1.0);
      const double w = tab.rule.weights[q];
      double u = 0.0;
      for (int l = 0; l < n; ++l) u += ce[l] * tab.p[q * n + l];
      const double flux = problem.kappa(x, t) * u;
      const double src = 0.5 * h * problem.rho(x, t);
      for (int l = 0; l < n; ++l) oe[l] += w * (flux * tab.dp[q * n + l] + src * tab.p[q * n + l]);
    }
    // Upwind fluxes at both element ends.
    const double f_right = problem.kappa(mesh.breakpoint(e + 1), t) * right_trace(c, e, d);
    double f_left = 0.0;
    if (e > 0) {
      f_left = problem.kappa(xe, t) * right_trace(c, e - 1, d);
    } else if (problem.bc == BoundaryCondition::Periodic) {
      f_left = problem.kappa(xe, t) * right_trace(c, mesh.N - 1, d);
    } else {
      f_left = problem.kappa(xe, t) * problem.inflow(t);
    }
    for (int l = 0; l < n; ++l) {
      const double sign = l % 2 == 0 ? 1.0 : -1.0;
      oe[l] = (oe[l] - f_right + sign * f_left) * (2 * l + 1) / h;
    }
  }
}

}  // namespace

std::vector<double> dg_rhs(const DGField& field, double t, const TestProblem& problem) {
  if (field.basis != Basis::Legendre) return dg_rhs(to_legendre(field), t, problem);
  std::vector<double> out;
  rhs_into(field.coeffs, field.mesh, field.d, t, problem, volume_tables(field.d), out);
  return out;
}

DGField dg_solve(const TestProblem& problem, const Mesh& mesh, int d, double T, double cfl) {
  if (T < 0.0) throw InvalidArgument("final time must be nonnegative");
  if (!(cfl > 0.0)) throw InvalidArgument("cfl must be positive");
  DGField field = l2_project(problem.u0, mesh, d);
  if (T == 0.0) return field;

  // Largest wave speed, sampled over the mesh and the time interval.
  double kmax = 0.0;
  for (int s = 0; s <= 16; ++s) {
    const double t = T * s / 16.0;
    for (int i = 0; i <= 4 * mesh.N; ++i) kmax = std::max(kmax, std::abs(problem.kappa(mesh.a + i * mesh.h() / 4, t)));
  }
  const double dt_target = cfl * mesh.h() / (kmax > 0.0 ? kmax : 1.0);
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt_target - 1e-9)));
  const double dt = T / static_cast<double>(steps);

  const VolumeTables tab = volume_tables(d);
  std::vector<double>& u = field.coeffs;
  std::vector<double> k1, k2, k3, k4, tmp(u.size());
  for (long step = 0; step < steps; ++step) {
    const double t = step * dt;
    rhs_into(u, mesh, d, t, problem, tab, k1);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    rhs_into(tmp, mesh, d, t + 0.5 * dt, problem, tab, k2);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    rhs_into(tmp, mesh, d, t + 0.5 * dt, problem, tab, k3);
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = u[i] + dt * k3[i];
    rhs_into(tmp, mesh, d, t + dt, problem, tab, k4);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!(std::abs(u[i]) <= 1e10))
        throw UnstableBlowup("coefficient exceeded 1e10 at step " + std::to_string(step + 1));
    }
  }
  field.time = T;
  return field;
}

}  // namespace siac
