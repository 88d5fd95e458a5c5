#include "siac/psiac.hpp"

#include <algorithm>
#include <cmath>

#include "siac/errors.hpp"
#include "siac/spline.hpp"

namespace siac {

namespace {

void require_boundary(const FilterSpec& spec) {
  if (spec.side == Side::Interior) throw UnsupportedFamilySide("boundary filtering needs a left or right spec");
}

// Left windows start at the boundary (y = 0); right windows end at it.
Rational window_origin(const FilterSpec& spec) {
  return spec.side == Side::Left ? Rational(0) : Rational(-window_elements(spec));
}

KnotVector reflected_window(const FilterSpec& spec, std::size_t spline) {
  return spec.splines[spline].window.reflected().shifted(spec.anchor_offset());
}

}  // namespace

int window_elements(const FilterSpec& spec) {
  const Rational w = ceil(spec.support_width());
  return static_cast<int>(w.numerator().get_si());
}

RatMatrix t_matrix(const FilterSpec& spec, int data_degree) {
  require_boundary(spec);
  if (data_degree < 0) throw InvalidArgument("negative data degree");
  const int elements = window_elements(spec);
  const Rational origin = window_origin(spec);
  const std::size_t cols = spec.size();
  const int n = data_degree + 1;

  std::vector<RatPoly> basis;
  for (int l = 0; l < n; ++l) basis.push_back(bernstein_unit_poly(data_degree, l));

  RatMatrix t(static_cast<std::size_t>(elements) * n, cols);
  for (std::size_t jp = 0; jp < cols; ++jp) {
    const std::size_t spline = cols - 1 - jp;
    const KnotVector window = reflected_window(spec, spline);
    if (window.front() < origin || window.back() > origin + Rational(elements))
      throw WindowOutOfDomain("reflected B-spline window leaves the data window");
    const PiecewisePolynomial b = unit_bspline_piecewise(window, spec.splines[spline].degree);
    for (int e = 0; e < elements; ++e) {
      const Rational ye = origin + Rational(e);
      const Rational ye1 = ye + Rational(1);
      for (std::size_t p = 0; p < b.pieces.size(); ++p) {
        const Rational lo = std::max(b.breakpoints[p], ye);
        const Rational hi = std::min(b.breakpoints[p + 1], ye1);
        if (!(lo < hi)) continue;
        for (int l = 0; l < n; ++l) {
          const RatPoly phi = basis[l].compose_affine(Rational(1), -ye);
          t(static_cast<std::size_t>(e) * n + l, jp) += (b.pieces[p] * phi).integral(lo, hi);
        }
      }
    }
  }
  return t;
}

RatMatrix np0_t_matrix(const FilterSpec& spec, int data_degree) {
  require_boundary(spec);
  if (spec.uniform_degree() != 0) throw InvalidArgument("closed form needs piecewise-constant B-splines");
  const int elements = window_elements(spec);
  const Rational origin = window_origin(spec);
  const std::size_t cols = spec.size();
  const int n = data_degree + 1;
  RatMatrix t(static_cast<std::size_t>(elements) * n, cols);
  for (std::size_t jp = 0; jp < cols; ++jp) {
    const KnotVector window = reflected_window(spec, cols - 1 - jp);
    const Rational start = window.front() - origin;
    if (window.back() - window.front() != Rational(1) || !start.is_integer())
      throw InvalidArgument("closed form needs unit windows aligned with the mesh");
    const long e = start.numerator().get_si();
    for (int l = 0; l < n; ++l) t(static_cast<std::size_t>(e) * n + l, jp) = Rational(1, n);
  }
  return t;
}

RatMatrix reversal_matrix(std::size_t n) {
  RatMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, n - 1 - i) = Rational(1);
  return a;
}

RatMatrix q_matrix(const FilterSpec& spec, int data_degree) {
  const RatMatrix t = t_matrix(spec, data_degree);
  return t * reversal_matrix(spec.size()) * shifted_coefficient_polynomials(spec).matrix;
}

std::vector<Rational> endpoint_vector(const RatMatrix& q, const Rational& xi) {
  std::vector<Rational> out(q.rows(), Rational(0));
  for (std::size_t i = 0; i < q.rows(); ++i) {
    Rational acc(0);
    for (std::size_t m = q.cols(); m-- > 0;) acc = acc * xi + q(i, m);
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// BoundaryPolynomial

double BoundaryPolynomial::operator()(double x) const {
  const double xi = (x - anchor) / h;
  double acc = 0.0;
  for (std::size_t m = coeffs.size(); m-- > 0;) acc = acc * xi + coeffs[m];
  return acc;
}

BoundaryPolynomial BoundaryPolynomial::derivative(int order) const {
  if (order < 0) throw InvalidArgument("negative derivative order");
  BoundaryPolynomial out = *this;
  out.derivative_order += order;
  if (order == 0) return out;
  if (order > degree()) {
    out.coeffs = {0.0};
    return out;
  }
  const double scale = std::pow(h, -order);
  out.coeffs.assign(coeffs.size() - order, 0.0);
  for (std::size_t m = 0; m < out.coeffs.size(); ++m) {
    double falling = 1.0;
    for (int i = 1; i <= order; ++i) falling *= static_cast<double>(m + i);
    out.coeffs[m] = coeffs[m + order] * falling * scale;
  }
  return out;
}

std::vector<double> BoundaryPolynomial::physical_coefficients() const {
  std::vector<double> out(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) out[k] = coeffs[k] / std::pow(h, static_cast<double>(k));
  return out;
}

// ---------------------------------------------------------------------------
// BoundaryFilter

BoundaryFilter::BoundaryFilter(FilterSpec spec, int data_degree)
    : spec_(std::move(spec)),
      data_degree_(data_degree),
      elements_(window_elements(spec_)),
      q_exact_(q_matrix(spec_, data_degree)),
      q_(q_exact_.to_double()) {}

int BoundaryFilter::first_element(int N) const { return spec_.side == Side::Left ? 0 : N - elements_; }

BoundaryPolynomial BoundaryFilter::apply(const DGField& field) const {
  if (field.d != data_degree_) throw DimensionMismatch("field degree differs from the filter's data degree");
  const Mesh& mesh = field.mesh;
  if (mesh.N < elements_)
    throw MeshTooCoarse("boundary window needs " + std::to_string(elements_) + " elements, mesh has " +
                        std::to_string(mesh.N));
  const int n = data_degree_ + 1;
  const std::size_t cols = q_exact_.cols();
  std::vector<double> l2b;
  if (field.basis == Basis::Legendre) l2b = legendre_to_bernstein_matrix(data_degree_).to_double();

  // wide kernels (SRV) cancel strongly in this sum
  std::vector<long double> poly(cols, 0.0L);
  const int first = first_element(mesh.N);
  std::vector<double> local(n);
  for (int e = 0; e < elements_; ++e) {
    const auto c = field.element(first + e);
    for (int i = 0; i < n; ++i) {
      if (l2b.empty()) {
        local[i] = c[i];
      } else {
        local[i] = 0.0;
        for (int j = 0; j < n; ++j) local[i] += l2b[i * n + j] * c[j];
      }
    }
    for (int i = 0; i < n; ++i) {
      const double* row = q_.data() + (static_cast<std::size_t>(e) * n + i) * cols;
      for (std::size_t m = 0; m < cols; ++m) poly[m] += static_cast<long double>(local[i]) * row[m];
    }
  }

  BoundaryPolynomial out;
  out.side = spec_.side;
  out.h = mesh.h();
  out.coeffs.assign(poly.begin(), poly.end());
  const double width = spec_.region_width.to_double() * out.h;
  if (spec_.side == Side::Left) {
    out.anchor = mesh.a + spec_.knots.back().to_double() * out.h;
    out.lo = mesh.a;
    out.hi = mesh.a + width;
  } else {
    out.anchor = mesh.b + spec_.knots.front().to_double() * out.h;
    out.lo = mesh.b - width;
    out.hi = mesh.b;
  }
  return out;
}

RatPoly BoundaryFilter::apply_exact(const std::vector<Rational>& window) const {
  if (window.size() != q_exact_.rows()) throw DimensionMismatch("window coefficient count differs from Q rows");
  std::vector<Rational> poly(q_exact_.cols(), Rational(0));
  for (std::size_t i = 0; i < q_exact_.rows(); ++i) {
    if (window[i].is_zero()) continue;
    for (std::size_t m = 0; m < q_exact_.cols(); ++m) poly[m] += window[i] * q_exact_(i, m);
  }
  return RatPoly(std::move(poly));
}

BoundaryPolynomial filter_boundary(const DGField& field, const FilterSpec& spec) {
  return BoundaryFilter(spec, field.d).apply(field);
}

BoundaryPolynomial filter_boundary_derivative(const DGField& field, const FilterSpec& spec, int order) {
  if (order > spec.reproduction_degree) throw InvalidArgument("derivative order exceeds the reproduction degree");
  return filter_boundary(field, spec).derivative(order);
}

std::vector<Rational> bernstein_window(const RatPoly& p, int degree, const Rational& origin, int elements) {
  if (p.degree() > degree) throw InvalidArgument("polynomial degree exceeds the Bernstein degree");
  std::vector<Rational> out;
  for (int e = 0; e < elements; ++e) {
    // Monomial coefficients of z -> p(origin + e + z), then
    // z^k = sum_{l >= k} C(l,k)/C(d,k) B_l^d(z).
    const RatPoly local = p.compose_affine(Rational(1), origin + Rational(e));
    const auto& a = local.coeffs();
    for (int l = 0; l <= degree; ++l) {
      Rational acc(0);
      for (int k = 0; k <= l && k < static_cast<int>(a.size()); ++k)
        acc += a[k] * binomial(l, k) / binomial(degree, k);
      out.push_back(acc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric filter

SymmetricFilter::SymmetricFilter(FilterSpec spec) : spec_(std::move(spec)) {
  kernel_ = kernel_piecewise(spec_, static_coefficients(spec_));
  kernel_degree_ = 0;
  for (const auto& term : spec_.splines) kernel_degree_ = std::max(kernel_degree_, term.degree);
  for (const auto& b : kernel_.breakpoints) breaks_.push_back(b.to_double());
  for (std::size_t i = 0; i < kernel_.pieces.size(); ++i) {
    const RatPoly local = kernel_.pieces[i].recentered(kernel_.breakpoints[i]);
    std::vector<double> c;
    for (const auto& v : local.coeffs()) c.push_back(v.to_double());
    pieces_.push_back(std::move(c));
  }
}

std::pair<double, double> SymmetricFilter::region(const Mesh& mesh) const {
  const double h = mesh.h();
  return {mesh.a + spec_.knots.back().to_double() * h, mesh.b + spec_.knots.front().to_double() * h};
}

double SymmetricFilter::operator()(const DGField& field, double x) const {
  const Mesh& mesh = field.mesh;
  const double h = mesh.h();
  const auto [lo, hi] = region(mesh);
  const double tol = 1e-12 * (mesh.b - mesh.a);
  if (x < lo - tol || x > hi + tol) throw OutsideInteriorRegion("x = " + std::to_string(x) + " outside the interior region");

  // Breakpoints in the kernel variable sigma: kernel knots and element edges.
  std::vector<double> cuts = breaks_;
  for (int i = 0; i <= mesh.N; ++i) {
    const double s = (x - mesh.breakpoint(i)) / h;
    if (s > breaks_.front() && s < breaks_.back()) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());

  const GaussRule rule = gauss_legendre((kernel_degree_ + field.d) / 2 + 1);
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double s0 = cuts[c];
    const double s1 = cuts[c + 1];
    if (!(s1 - s0 > 1e-14)) continue;
    const double mid = 0.5 * (s0 + s1);
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), mid);
    const std::size_t piece = std::min<std::size_t>(static_cast<std::size_t>(it - breaks_.begin()) - 1, pieces_.size() - 1);
    const int e = mesh.element_of(x - h * mid);
    const auto& kp = pieces_[piece];
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + 0.5 * (s1 - s0) * rule.nodes[q];
      const double ds = s - breaks_[piece];
      double k = 0.0;
      for (std::size_t m = kp.size(); m-- > 0;) k = k * ds + kp[m];
      acc += 0.5 * (s1 - s0) * rule.weights[q] * k * field.eval_element(e, x - h * s);
    }
  }
  return acc;
}

double symmetric_filter_eval(const DGField& field, const FilterSpec& spec, double x) {
  return SymmetricFilter(spec)(field, x);
}

// ---------------------------------------------------------------------------
// Reference convolution

WeightedKernel kernel_at(const FilterSpec& spec, const Mesh& mesh, double x) {
  const double h = mesh.h();
  Rational xi(0);
  if (spec.side == Side::Left) xi = Rational::from_double((x - (mesh.a + spec.knots.back().to_double() * h)) / h);
  if (spec.side == Side::Right) xi = Rational::from_double((x - (mesh.b + spec.knots.front().to_double() * h)) / h);
  const auto c = spec.side == Side::Interior ? static_coefficients(spec) : coefficients_for_shift(spec, xi);
  const double xid = xi.to_double();

  WeightedKernel k;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    k.coefficients.push_back(c[j].to_double());
    std::vector<double> w;
    for (const auto& t : spec.splines[j].window.knots()) w.push_back(h * (t.to_double() + xid));
    k.windows.push_back(std::move(w));
    k.degrees.push_back(spec.splines[j].degree);
  }
  return k;
}

double reference_convolve(const WeightedKernel& kernel, const DGField& field, double x) {
  const Mesh& mesh = field.mesh;
  if (kernel.windows.empty()) return 0.0;
  std::vector<double> cuts;
  int max_degree = 0;
  for (std::size_t j = 0; j < kernel.windows.size(); ++j) {
    cuts.insert(cuts.end(), kernel.windows[j].begin(), kernel.windows[j].end());
    max_degree = std::max(max_degree, kernel.degrees[j]);
  }
  const auto [smin_it, smax_it] = std::minmax_element(cuts.begin(), cuts.end());
  const double smin = *smin_it;
  const double smax = *smax_it;
  const double tol = 1e-10 * mesh.h();
  if (x - smax < mesh.a - tol || x - smin > mesh.b + tol)
    throw WindowOutOfDomain("kernel support at x = " + std::to_string(x) + " leaves the domain");
  for (int i = 0; i <= mesh.N; ++i) {
    const double s = x - mesh.breakpoint(i);
    if (s > smin && s < smax) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());

  const GaussRule rule = gauss_legendre((max_degree + field.d) / 2 + 2);
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double s0 = cuts[c];
    const double s1 = cuts[c + 1];
    if (!(s1 - s0 > 1e-14 * mesh.h())) continue;
    const double mid = 0.5 * (s0 + s1);
    const int e = mesh.element_of(x - mid);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = mid + 0.5 * (s1 - s0) * rule.nodes[q];
      double k = 0.0;
      for (std::size_t j = 0; j < kernel.windows.size(); ++j)
        k += kernel.coefficients[j] * eval_unit_bspline(std::span<const double>(kernel.windows[j]), kernel.degrees[j], s);
      acc += 0.5 * (s1 - s0) * rule.weights[q] * k * field.eval_element(e, x - s);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Blending

double blend_weight(double z, int rho, BlendProfile profile, int derivative) {
  if (rho < 1) throw InvalidArgument("blend order must be at least 1");
  const int n = profile == BlendProfile::Hermite ? 2 * rho + 1 : 2 * rho;
  // Monomial coefficients of sum_{i > rho} C(n,i) z^i (1-z)^(n-i).
  std::vector<double> mono(n + 1, 0.0);
  for (int i = rho + 1; i <= n; ++i) {
    const double cni = binomial(n, i).to_double();
    for (int k = 0; k <= n - i; ++k) {
      const double term = cni * binomial(n - i, k).to_double() * (k % 2 == 0 ? 1.0 : -1.0);
      mono[i + k] += term;
    }
  }
  double acc = 0.0;
  for (int m = n; m >= derivative; --m) {
    double falling = 1.0;
    for (int i = 0; i < derivative; ++i) falling *= m - i;
    acc = acc * z + mono[m] * falling;
  }
  return acc;
}

BlendedEvaluator::BlendedEvaluator(BoundaryPolynomial boundary, std::function<double(double)> interior, double a1,
                                   double a2, int rho, BlendProfile profile)
    : boundary_(std::move(boundary)), interior_(std::move(interior)), a1_(a1), a2_(a2), rho_(rho), profile_(profile) {
  if (a1 == a2) throw EmptyOverlap("blending overlap has zero length");
  if (rho < 1) throw InvalidArgument("blend order must be at least 1");
}

double BlendedEvaluator::operator()(double x) const {
  const double z = (x - a1_) / (a2_ - a1_);
  if (z <= 0.0) return boundary_(x);
  if (z >= 1.0) return interior_(x);
  const double beta = blend_weight(z, rho_, profile_);
  return (1.0 - beta) * boundary_(x) + beta * interior_(x);
}

BlendedEvaluator blend_transition(const BoundaryPolynomial& boundary, std::function<double(double)> interior,
                                  double a1, double a2, int rho, BlendProfile profile) {
  return BlendedEvaluator(boundary, std::move(interior), a1, a2, rho, profile);
}

}  // namespace siac
