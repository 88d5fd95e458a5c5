#include "siac/filters.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "siac/errors.hpp"

namespace siac {

std::string to_string(Family family) {
  switch (family) {
    case Family::Symmetric: return "symmetric";
    case Family::RS: return "RS";
    case Family::SRV: return "SRV";
    case Family::RLKV: return "RLKV";
    case Family::NPk: return "NPk";
  }
  return "?";
}

std::string to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Interior: return "interior";
  }
  return "?";
}

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

Family parse_family(std::string_view text, int* npk_degree) {
  const std::string s = lower(text);
  if (s == "symmetric" || s == "sym") return Family::Symmetric;
  if (s == "rs") return Family::RS;
  if (s == "srv") return Family::SRV;
  if (s == "rlkv") return Family::RLKV;
  if (s.size() >= 3 && s.rfind("np", 0) == 0 &&
      std::all_of(s.begin() + 2, s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    if (npk_degree) *npk_degree = std::stoi(s.substr(2));
    return Family::NPk;
  }
  throw InvalidArgument("unknown filter family '" + std::string(text) + "'");
}

Side parse_side(std::string_view text) {
  const std::string s = lower(text);
  if (s == "left" || s == "l") return Side::Left;
  if (s == "right" || s == "r") return Side::Right;
  if (s == "interior" || s == "i" || s == "center") return Side::Interior;
  throw InvalidArgument("unknown side '" + std::string(text) + "'");
}

std::optional<int> FilterSpec::uniform_degree() const {
  if (splines.empty()) return std::nullopt;
  const int k = splines.front().degree;
  for (const auto& s : splines)
    if (s.degree != k) return std::nullopt;
  return k;
}

std::string FilterSpec::name() const {
  if (!label.empty()) return label;
  if (family == Family::NPk) return "NP" + std::to_string(npk_degree);
  return to_string(family);
}

Rational FilterSpec::anchor_offset() const {
  switch (side) {
    case Side::Left: return knots.back();
    case Side::Right: return knots.front();
    case Side::Interior: return Rational(0);
  }
  return Rational(0);
}

namespace {

// -mu, -mu+1, ..., mu.
std::vector<Rational> unit_steps(const Rational& mu) {
  std::vector<Rational> out;
  for (Rational t = -mu; t <= mu; t += Rational(1)) out.push_back(t);
  return out;
}

void attach_windows(FilterSpec& spec, const std::vector<int>& degrees) {
  spec.splines.clear();
  for (std::size_t i = 0; i < spec.index_set.size(); ++i) {
    const int j = spec.index_set[i];
    const int k = degrees[i];
    if (j < 0 || static_cast<std::size_t>(j + k + 2) > spec.knots.size())
      throw InvalidArgument("index set entry " + std::to_string(j) + " exceeds the knot sequence");
    std::vector<Rational> w(spec.knots.knots().begin() + j, spec.knots.knots().begin() + j + k + 2);
    if (w.front() == w.back())
      throw DegenerateSupport("B-spline " + std::to_string(j) + " has an empty window");
    spec.splines.push_back({k, KnotVector(std::move(w))});
  }
  spec.reproduction_degree = static_cast<int>(spec.splines.size()) - 1;
}

FilterSpec consecutive_spec(Family family, int d, Side side, const Rational& mu, int k) {
  FilterSpec spec;
  spec.family = family;
  spec.dg_degree = d;
  spec.side = side;
  spec.mu = mu;
  spec.region_width = mu;
  spec.knots = KnotVector(unit_steps(mu));
  const int count = static_cast<int>(spec.knots.size()) - k - 1;
  for (int j = 0; j < count; ++j) spec.index_set.push_back(j);
  attach_windows(spec, std::vector<int>(spec.index_set.size(), k));
  return spec;
}

// Knots of a left kernel with the last knot value repeated `multiplicity` times.
FilterSpec left_stacked_spec(Family family, int d, const Rational& mu, std::vector<int> index_set,
                             std::vector<int> degrees, const std::vector<Rational>& knots) {
  FilterSpec spec;
  spec.family = family;
  spec.dg_degree = d;
  spec.side = Side::Left;
  spec.mu = mu;
  spec.region_width = mu;
  spec.knots = KnotVector(knots);
  spec.index_set = std::move(index_set);
  attach_windows(spec, degrees);
  return spec;
}

}  // namespace

FilterSpec mirrored(const FilterSpec& spec) {
  FilterSpec out = spec;
  out.side = spec.side == Side::Left ? Side::Right : spec.side == Side::Right ? Side::Left : Side::Interior;
  out.knots = spec.knots.reflected();
  const int n = static_cast<int>(spec.knots.size()) - 1;
  out.splines.clear();
  out.index_set.clear();
  for (std::size_t i = spec.splines.size(); i-- > 0;) {
    const auto& term = spec.splines[i];
    out.splines.push_back({term.degree, term.window.reflected()});
    out.index_set.push_back(n - (spec.index_set[i] + term.degree + 1));
  }
  return out;
}

FilterSpec build_rlkv_spec(int d, Side side, int extra_degree) {
  if (d < 1) throw InvalidArgument("DG degree must be at least 1");
  if (side == Side::Interior) throw UnsupportedFamilySide("RLKV is a boundary filter");
  if (extra_degree < 0) throw InvalidArgument("negative RLKV extra degree");
  // Consecutive knots of the symmetric kernel, -mu..mu-1, then mu stacked
  // extra_degree+1 times. Windows 0..2d are the 2d+1 degree-d B-splines of
  // the symmetric kernel; window 3d is (mu-1, mu, ..., mu).
  const Rational mu(3 * d + 1, 2);
  std::vector<Rational> knots;
  for (Rational t = -mu; t < mu; t += Rational(1)) knots.push_back(t);
  for (int i = 0; i <= extra_degree; ++i) knots.push_back(mu);
  std::vector<int> index_set;
  std::vector<int> degrees;
  for (int j = 0; j <= 2 * d; ++j) {
    index_set.push_back(j);
    degrees.push_back(d);
  }
  index_set.push_back(3 * d);
  degrees.push_back(extra_degree);
  FilterSpec left = left_stacked_spec(Family::RLKV, d, mu, index_set, degrees, knots);
  return side == Side::Left ? left : mirrored(left);
}

FilterSpec build_spec(Family family, int d, Side side, int npk_degree) {
  if (d < 1) throw InvalidArgument("DG degree must be at least 1");
  const bool interior = side == Side::Interior;
  if ((family == Family::Symmetric) != interior)
    throw UnsupportedFamilySide(to_string(family) + " filter cannot be used on side " + to_string(side));

  switch (family) {
    case Family::Symmetric:
    case Family::RS:
      // r = 2d, mu = (r + d + 1) / 2.
      return consecutive_spec(family, d, side, Rational(3 * d + 1, 2), d);
    case Family::SRV:
      // r = 4d, mu = (5d + 1) / 2.
      return consecutive_spec(family, d, side, Rational(5 * d + 1, 2), d);
    case Family::RLKV:
      return build_rlkv_spec(d, side, d);
    case Family::NPk: {
      if (npk_degree < 0) throw InvalidArgument("negative NPk degree");
      const Rational mu(3 * d + 1, 2);
      if (npk_degree == 0) {
        FilterSpec spec = consecutive_spec(Family::NPk, d, side, mu, 0);
        spec.npk_degree = 0;
        return spec;
      }
      // -mu..mu-2, then mu-1 and mu each repeated k+1 times; all windows used.
      std::vector<Rational> knots;
      for (Rational t = -mu; t <= mu - Rational(2); t += Rational(1)) knots.push_back(t);
      for (int i = 0; i <= npk_degree; ++i) knots.push_back(mu - Rational(1));
      for (int i = 0; i <= npk_degree; ++i) knots.push_back(mu);
      const int count = static_cast<int>(knots.size()) - npk_degree - 1;
      std::vector<int> index_set;
      for (int j = 0; j < count; ++j) index_set.push_back(j);
      FilterSpec left = left_stacked_spec(Family::NPk, d, mu, index_set,
                                          std::vector<int>(index_set.size(), npk_degree), knots);
      left.npk_degree = npk_degree;
      return side == Side::Left ? left : mirrored(left);
    }
  }
  throw InvalidArgument("unknown family");
}

FilterSpec make_custom_spec(const KnotVector& knots, int degree, std::vector<int> index_set, Side side,
                            std::optional<Rational> region_width) {
  if (knots.size() < static_cast<std::size_t>(degree) + 2)
    throw InvalidArgument("too few knots for the kernel degree");
  FilterSpec spec;
  spec.family = Family::NPk;
  spec.npk_degree = degree;
  spec.label = "custom";
  spec.dg_degree = 0;
  spec.side = side;
  spec.knots = knots;
  spec.index_set = std::move(index_set);
  attach_windows(spec, std::vector<int>(spec.index_set.size(), degree));
  spec.mu = (knots.back() - knots.front()) / Rational(2);
  spec.region_width = region_width.value_or(knots.back() - knots.front());
  return spec;
}

// ---------------------------------------------------------------------------

RatMatrix reproduction_matrix(const FilterSpec& spec) {
  const std::size_t n = spec.size();
  RatMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t row = 0; row < n; ++row)
      m(row, j) = bspline_moment(spec.splines[j].window, spec.splines[j].degree, static_cast<unsigned>(row));
  return m;
}

RatMatrix power_sum_matrix(const FilterSpec& spec) {
  if (!spec.uniform_degree()) throw InvalidArgument("power-sum form needs a uniform kernel degree");
  const std::size_t n = spec.size();
  RatMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t row = 0; row < n; ++row)
      m(row, j) = complete_homogeneous(spec.splines[j].window.knots(), static_cast<unsigned>(row));
  return m;
}

RatMatrix least_degree_matrix(const FilterSpec& spec) {
  if (spec.uniform_degree() != 0) throw InvalidArgument("closed form needs piecewise-constant B-splines");
  const std::size_t n = spec.size();
  RatMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Rational& lo = spec.splines[j].window[0];
    const Rational& hi = spec.splines[j].window[1];
    for (std::size_t row = 0; row < n; ++row) {
      const auto e = static_cast<unsigned>(row + 1);
      m(row, j) = (pow(hi, e) - pow(lo, e)) / (hi - lo);
    }
  }
  return m;
}

namespace {

RatMatrix checked_inverse(const RatMatrix& m) {
  try {
    return invert_exact(m);
  } catch (const SingularMatrix&) {
    throw SingularReproduction("reproduction matrix is singular");
  }
}

std::vector<Rational> alternating_signs(std::size_t n) {
  std::vector<Rational> out;
  for (std::size_t m = 0; m < n; ++m) out.emplace_back(m % 2 == 0 ? 1 : -1);
  return out;
}

std::vector<Rational> unit_vector(std::size_t n) {
  std::vector<Rational> e(n, Rational(0));
  if (n > 0) e[0] = Rational(1);
  return e;
}

}  // namespace

std::vector<Rational> static_coefficients(const FilterSpec& spec) {
  const RatMatrix m = reproduction_matrix(spec);
  const auto e0 = unit_vector(m.rows());
  try {
    return solve_exact(m, RatMatrix::column(e0)).column_values(0);
  } catch (const SingularMatrix&) {
    throw SingularReproduction("reproduction matrix is singular");
  }
}

std::vector<Rational> CoefficientPolynomials::at(const Rational& xi) const {
  std::vector<Rational> out(matrix.rows(), Rational(0));
  for (std::size_t j = 0; j < matrix.rows(); ++j) {
    Rational acc(0);
    for (std::size_t m = matrix.cols(); m-- > 0;) acc = acc * xi + matrix(j, m);
    out[j] = acc;
  }
  return out;
}

std::vector<double> CoefficientPolynomials::at(double xi) const {
  const auto c = matrix.to_double();
  std::vector<double> out(matrix.rows(), 0.0);
  for (std::size_t j = 0; j < matrix.rows(); ++j) {
    double acc = 0.0;
    for (std::size_t m = matrix.cols(); m-- > 0;) acc = acc * xi + c[j * matrix.cols() + m];
    out[j] = acc;
  }
  return out;
}

RatPoly CoefficientPolynomials::poly(std::size_t j) const { return RatPoly(matrix.row_values(j)); }

CoefficientPolynomials shifted_coefficient_polynomials(const FilterSpec& spec) {
  const RatMatrix inv = checked_inverse(reproduction_matrix(spec));
  const auto signs = alternating_signs(inv.cols());
  return {inv * RatMatrix::diagonal(signs)};
}

CoefficientPolynomials shifted_coefficient_polynomials_power_form(const FilterSpec& spec) {
  const auto k = spec.uniform_degree();
  if (!k) throw InvalidArgument("power form needs a uniform kernel degree");
  const RatMatrix inv = checked_inverse(power_sum_matrix(spec));
  std::vector<Rational> diag;
  for (std::size_t m = 0; m < inv.cols(); ++m) {
    const Rational b = binomial(static_cast<long>(m) + *k + 1, static_cast<long>(m));
    diag.push_back(m % 2 == 0 ? b : -b);
  }
  return {inv * RatMatrix::diagonal(diag)};
}

std::vector<Rational> coefficients_for_shift(const FilterSpec& spec, const Rational& xi) {
  FilterSpec shifted = spec;
  shifted.knots = spec.knots.shifted(xi);
  for (auto& term : shifted.splines) term.window = term.window.shifted(xi);
  return static_coefficients(shifted);
}

PiecewisePolynomial kernel_piecewise(const FilterSpec& spec, const std::vector<Rational>& coefficients,
                                     const Rational& xi) {
  if (coefficients.size() != spec.size()) throw DimensionMismatch("one coefficient per B-spline");
  // Collect every breakpoint, then sum the B-spline pieces on each span.
  std::vector<Rational> breaks;
  std::vector<PiecewisePolynomial> parts;
  for (const auto& term : spec.splines) {
    parts.push_back(unit_bspline_piecewise(term.window.shifted(xi), term.degree));
    breaks.insert(breaks.end(), parts.back().breakpoints.begin(), parts.back().breakpoints.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PiecewisePolynomial out;
  out.breakpoints = breaks;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const Rational mid = (breaks[s] + breaks[s + 1]) / Rational(2);
    RatPoly acc = RatPoly::constant(Rational(0));
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto& bp = parts[j].breakpoints;
      if (mid < bp.front() || mid > bp.back()) continue;
      const auto it = std::upper_bound(bp.begin(), bp.end(), mid);
      const auto piece = static_cast<std::size_t>(it - bp.begin()) - 1;
      acc = acc + coefficients[j] * parts[j].pieces[piece];
    }
    out.pieces.push_back(acc);
  }
  return out;
}

}  // namespace siac
