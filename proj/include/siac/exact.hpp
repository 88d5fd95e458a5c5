#pragma once

// Exact rational scalars, dense rational matrices and rational polynomials.
//
// Everything that defines a filter (knots, moments, reproduction matrices,
// coefficient polynomials, convolution matrices) is assembled in this
// arithmetic. Conversion to double happens only when the exact objects are
// contracted against floating-point DG data.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace siac {

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator. Zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(long n);  // NOLINT(google-explicit-constructor)
  Rational(int n) : Rational(static_cast<long>(n)) {}  // NOLINT
  Rational(long n, long d);
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(const mpq_class& q);

  /// Exact value of a finite double (every double is a dyadic rational).
  static Rational from_double(double x);
  /// Parses "p", "p/q" or a plain decimal such as "-1.25".
  static Rational parse(std::string_view text);

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// Nearest double (round-to-nearest-even).
  double to_double() const;
  /// "p/q", with "/q" omitted when q == 1.
  std::string to_string() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_{0};
};

Rational pow(const Rational& base, unsigned exponent);
Rational abs(const Rational& x);
Rational floor(const Rational& x);
Rational ceil(const Rational& x);
/// Binomial coefficient C(n, k) for 0 <= k <= n; 0 otherwise.
Rational binomial(long n, long k);
Rational factorial(unsigned n);

/// Dense row-major rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  /// Builds from nested rows; all rows must have the same length.
  static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  static RatMatrix identity(std::size_t n);
  static RatMatrix column(std::span<const Rational> values);
  static RatMatrix diagonal(std::span<const Rational> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  const std::vector<Rational>& entries() const { return entries_; }
  std::vector<Rational> column_values(std::size_t c) const;
  std::vector<Rational> row_values(std::size_t r) const;
  RatMatrix transpose() const;
  /// Row-major double snapshot.
  std::vector<double> to_double() const;

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

std::ostream& operator<<(std::ostream& os, const RatMatrix& m);

/// Solves A X = B exactly by fraction-free (Bareiss) elimination.
/// Rows are cleared of denominators first; the pivot in each column is the
/// first nonzero entry at or below the diagonal. B may have several columns.
RatMatrix solve_exact(const RatMatrix& a, const RatMatrix& b);
RatMatrix invert_exact(const RatMatrix& a);
Rational determinant(const RatMatrix& a);

/// Polynomial sum_m coeffs[m] * (x - center)^m with rational coefficients.
class RatPoly {
 public:
  RatPoly() : coeffs_{Rational(0)} {}
  explicit RatPoly(std::vector<Rational> coeffs, Rational center = Rational(0));
  static RatPoly constant(const Rational& c) { return RatPoly({c}); }
  /// The polynomial x (centered at 0).
  static RatPoly identity() { return RatPoly({Rational(0), Rational(1)}); }

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& center() const { return center_; }
  int degree() const;  // 0 for constants, including the zero polynomial
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0].is_zero(); }

  Rational operator()(const Rational& x) const;
  double eval(double x) const;

  /// Same polynomial expanded about a new center.
  RatPoly recentered(const Rational& new_center) const;
  RatPoly derivative(unsigned order = 1) const;
  /// Antiderivative vanishing at the center.
  RatPoly antiderivative() const;
  /// Exact integral over [lo, hi].
  Rational integral(const Rational& lo, const Rational& hi) const;
  /// p(alpha * x + beta) expressed about center 0.
  RatPoly compose_affine(const Rational& alpha, const Rational& beta) const;

  RatPoly operator-() const;
  friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const Rational& s, const RatPoly& p);
  /// Equality of the polynomial functions (centers may differ).
  friend bool operator==(const RatPoly& a, const RatPoly& b);

 private:
  void trim();

  std::vector<Rational> coeffs_;
  Rational center_{0};
};

std::ostream& operator<<(std::ostream& os, const RatPoly& p);

}  // namespace siac
