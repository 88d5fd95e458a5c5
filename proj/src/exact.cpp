#include "siac/exact.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

#include <mpfr.h>

#include "siac/errors.hpp"

namespace siac {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long n) : value_(n) {}

Rational::Rational(long n, long d) {
  if (d == 0) throw DivisionByZero("zero denominator");
  value_ = mpq_class(n, d);
  value_.canonicalize();
}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw DivisionByZero("zero denominator");
  value_ = mpq_class(n, d);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite double cannot be made exact");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ParseError("empty rational");
  const auto slash = s.find('/');
  auto parse_decimal = [](const std::string& part) -> Rational {
    if (part.empty()) throw ParseError("empty number");
    std::string digits;
    bool negative = false;
    std::size_t i = 0;
    if (part[0] == '+' || part[0] == '-') {
      negative = part[0] == '-';
      i = 1;
    }
    long frac_digits = -1;
    long exponent = 0;
    for (; i < part.size(); ++i) {
      const char c = part[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (frac_digits >= 0) ++frac_digits;
      } else if (c == '.' && frac_digits < 0) {
        frac_digits = 0;
      } else if ((c == 'e' || c == 'E') && !digits.empty()) {
        try {
          std::size_t used = 0;
          exponent = std::stol(part.substr(i + 1), &used);
          if (used != part.size() - i - 1) throw ParseError("bad exponent in '" + part + "'");
        } catch (const std::logic_error&) {
          throw ParseError("bad exponent in '" + part + "'");
        }
        break;
      } else {
        throw ParseError("unexpected character in '" + part + "'");
      }
    }
    if (digits.empty()) throw ParseError("no digits in '" + part + "'");
    mpz_class num(digits, 10);
    if (negative) num = -num;
    long scale = (frac_digits > 0 ? frac_digits : 0) - exponent;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    if (scale >= 0) return Rational(num, ten_pow);
    return Rational(num * ten_pow, mpz_class(1));
  };
  if (slash == std::string::npos) return parse_decimal(s);
  const Rational num = parse_decimal(s.substr(0, slash));
  const Rational den = parse_decimal(s.substr(slash + 1));
  if (den.is_zero()) throw DivisionByZero("zero denominator in '" + s + "'");
  return num / den;
}

double Rational::to_double() const {
  mpfr_t tmp;
  mpfr_init2(tmp, 53);
  mpfr_set_q(tmp, value_.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DivisionByZero("rational division by zero");
  value_ /= o.value_;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational pow(const Rational& base, unsigned exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), exponent);
  return Rational(n, d);
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational floor(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return Rational(q, mpz_class(1));
}

Rational ceil(const Rational& x) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return Rational(q, mpz_class(1));
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(out, mpz_class(1));
}

Rational factorial(unsigned n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return Rational(out, mpz_class(1));
}

// ---------------------------------------------------------------------------
// RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_)
    throw DimensionMismatch("entry count does not equal rows * cols");
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<Rational> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return RatMatrix(r, c, std::move(entries));
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

RatMatrix RatMatrix::column(std::span<const Rational> values) {
  return RatMatrix(values.size(), 1, std::vector<Rational>(values.begin(), values.end()));
}

RatMatrix RatMatrix::diagonal(std::span<const Rational> values) {
  RatMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

std::vector<Rational> RatMatrix::column_values(std::size_t c) const {
  std::vector<Rational> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

std::vector<Rational> RatMatrix::row_values(std::size_t r) const {
  return {entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<double> RatMatrix::to_double() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.to_double());
  return out;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shapes");
  RatMatrix out(a.rows_, b.cols_);
  mpq_class acc;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      acc = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& x = a(i, k);
        if (x.is_zero()) continue;
        acc += x.raw() * b(k, j).raw();
      }
      out(i, j) = Rational(acc);
    }
  }
  return out;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum shapes");
  RatMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference shapes");
  RatMatrix out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

std::ostream& operator<<(std::ostream& os, const RatMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? "; " : "");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c);
  }
  return os << ']';
}

namespace {

// Integer matrix [A | B] after clearing denominators row by row. Scaling a
// row of the augmented system leaves the solution unchanged.
std::vector<std::vector<mpz_class>> integer_augmented(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.rows();
  const std::size_t width = a.cols() + b.cols();
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(width));
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class scale = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a(i, j).raw().get_den_mpz_t());
    for (std::size_t j = 0; j < b.cols(); ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b(i, j).raw().get_den_mpz_t());
    for (std::size_t j = 0; j < width; ++j) {
      const Rational& v = j < a.cols() ? a(i, j) : b(i, j - a.cols());
      m[i][j] = v.raw().get_num() * (scale / v.raw().get_den());
    }
  }
  return m;
}

// In-place Bareiss forward elimination on the first n columns. Returns the
// sign of the row permutation, or 0 when the leading block is singular.
int bareiss_forward(std::vector<std::vector<mpz_class>>& m, std::size_t n) {
  int perm_sign = 1;
  mpz_class prev = 1;
  const std::size_t width = m.empty() ? 0 : m.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      perm_sign = -perm_sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < width; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return perm_sign;
}

}  // namespace

RatMatrix solve_exact(const RatMatrix& a, const RatMatrix& b) {
  if (!a.is_square()) throw DimensionMismatch("solve_exact needs a square matrix");
  if (b.rows() != a.rows()) throw DimensionMismatch("right-hand side row count");
  const std::size_t n = a.rows();
  auto m = integer_augmented(a, b);
  if (bareiss_forward(m, n) == 0) throw SingularMatrix("matrix is singular");

  RatMatrix x(n, b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      mpq_class acc(m[ii][n + c]);
      for (std::size_t j = ii + 1; j < n; ++j) {
        if (m[ii][j] == 0) continue;
        acc -= mpq_class(m[ii][j]) * x(j, c).raw();
      }
      acc /= mpq_class(m[ii][ii]);
      x(ii, c) = Rational(acc);
    }
  }
  return x;
}

RatMatrix invert_exact(const RatMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("invert_exact needs a square matrix");
  return solve_exact(a, RatMatrix::identity(a.rows()));
}

Rational determinant(const RatMatrix& a) {
  if (!a.is_square()) throw DimensionMismatch("determinant needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return Rational(1);
  // Row scales are divided back out at the end.
  auto m = integer_augmented(a, RatMatrix(n, 0));
  mpq_class scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class row_scale = 1;
    for (std::size_t j = 0; j < n; ++j)
      mpz_lcm(row_scale.get_mpz_t(), row_scale.get_mpz_t(), a(i, j).raw().get_den_mpz_t());
    scale *= mpq_class(row_scale);
  }
  const int sign = bareiss_forward(m, n);
  if (sign == 0) return Rational(0);
  return Rational(mpq_class(sign * m[n - 1][n - 1]) / scale);
}

// ---------------------------------------------------------------------------
// RatPoly

RatPoly::RatPoly(std::vector<Rational> coeffs, Rational center)
    : coeffs_(std::move(coeffs)), center_(std::move(center)) {
  if (coeffs_.empty()) coeffs_.emplace_back(0);
  trim();
}

void RatPoly::trim() {
  while (coeffs_.size() > 1 && coeffs_.back().is_zero()) coeffs_.pop_back();
}

int RatPoly::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

Rational RatPoly::operator()(const Rational& x) const {
  const Rational z = x - center_;
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double RatPoly::eval(double x) const {
  const double z = x - center_.to_double();
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->to_double();
  return acc;
}

RatPoly RatPoly::recentered(const Rational& new_center) const {
  if (new_center == center_) return *this;
  // p(x) = sum c_m (x - c0)^m with x - c0 = (x - c1) + (c1 - c0): Taylor shift.
  const Rational delta = new_center - center_;
  std::vector<Rational> out = coeffs_;
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) out[j - 1] += delta * out[j];
  return RatPoly(std::move(out), new_center);
}

RatPoly RatPoly::derivative(unsigned order) const {
  std::vector<Rational> out = coeffs_;
  for (unsigned o = 0; o < order; ++o) {
    if (out.size() <= 1) return RatPoly({Rational(0)}, center_);
    std::vector<Rational> next(out.size() - 1);
    for (std::size_t m = 1; m < out.size(); ++m) next[m - 1] = out[m] * Rational(static_cast<long>(m));
    out = std::move(next);
  }
  return RatPoly(std::move(out), center_);
}

RatPoly RatPoly::antiderivative() const {
  std::vector<Rational> out(coeffs_.size() + 1, Rational(0));
  for (std::size_t m = 0; m < coeffs_.size(); ++m)
    out[m + 1] = coeffs_[m] / Rational(static_cast<long>(m + 1));
  return RatPoly(std::move(out), center_);
}

Rational RatPoly::integral(const Rational& lo, const Rational& hi) const {
  const RatPoly anti = antiderivative();
  return anti(hi) - anti(lo);
}

RatPoly RatPoly::compose_affine(const Rational& alpha, const Rational& beta) const {
  // (alpha x + beta - center) = alpha x + shift.
  const Rational shift = beta - center_;
  const RatPoly inner({shift, alpha});
  RatPoly acc = RatPoly::constant(Rational(0));
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * inner + RatPoly::constant(*it);
  return acc;
}

RatPoly RatPoly::operator-() const {
  std::vector<Rational> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(-c);
  return RatPoly(std::move(out), center_);
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  const RatPoly bb = b.recentered(a.center_);
  std::vector<Rational> out(std::max(a.coeffs_.size(), bb.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < bb.coeffs_.size(); ++i) out[i] += bb.coeffs_[i];
  return RatPoly(std::move(out), a.center_);
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  const RatPoly bb = b.recentered(a.center_);
  std::vector<Rational> out(a.coeffs_.size() + bb.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < bb.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * bb.coeffs_[j];
  }
  return RatPoly(std::move(out), a.center_);
}

RatPoly operator*(const Rational& s, const RatPoly& p) {
  std::vector<Rational> out;
  out.reserve(p.coeffs_.size());
  for (const auto& c : p.coeffs_) out.push_back(s * c);
  return RatPoly(std::move(out), p.center_);
}

bool operator==(const RatPoly& a, const RatPoly& b) {
  return a.coeffs_ == b.recentered(a.center_).coeffs_;
}

std::ostream& operator<<(std::ostream& os, const RatPoly& p) {
  for (std::size_t m = 0; m < p.coeffs().size(); ++m) {
    if (m) os << " + ";
    os << '(' << p.coeffs()[m] << ')';
    if (m) {
      os << "*(x";
      if (!p.center().is_zero()) os << " - " << p.center();
      os << ')';
      if (m > 1) os << '^' << m;
    }
  }
  return os;
}

}  // namespace siac
