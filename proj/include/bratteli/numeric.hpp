#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bratteli/errors.hpp"

namespace bratteli {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVector = std::vector<BigInt>;
using IntMatrix = std::vector<IntVector>;
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;
using LdVector = std::vector<long double>;
using LdMatrix = std::vector<LdVector>;

inline long double to_long_double(const Rational& q) {
  return q.convert_to<long double>();
}

inline long double to_long_double(const BigInt& z) {
  return z.convert_to<long double>();
}

inline std::string to_string(const BigInt& z) { return z.str(); }

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string format_decimal(long double x, int digits = 17) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

/// Parses "p", "-p", "p/q" or a decimal literal into an exact rational.
namespace detail {

/// Optional sign followed by decimal digits only; leading zeros are harmless.
inline std::optional<BigInt> parse_integer(std::string text) {
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.erase(0, 1);
  }
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::nullopt;
  text.erase(0, std::min(text.find_first_not_of('0'), text.size() - 1));
  BigInt z(text);
  return negative ? BigInt(-z) : z;
}

}  // namespace detail

/// Accepts "p", "p/q" and finite decimals such as "-0.25".
inline std::optional<Rational> parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    auto p = detail::parse_integer(text.substr(0, slash));
    auto q = detail::parse_integer(text.substr(slash + 1));
    if (!p || !q || *q == 0) return std::nullopt;
    return Rational(*p, *q);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    auto z = detail::parse_integer(text);
    return z ? std::optional<Rational>(Rational(*z)) : std::nullopt;
  }
  std::string whole = text.substr(0, dot), fraction = text.substr(dot + 1);
  if (fraction.empty() || !std::all_of(fraction.begin(), fraction.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::nullopt;
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  auto digits = detail::parse_integer(whole + fraction);
  if (!digits) return std::nullopt;
  return Rational(*digits, boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fraction.size())));
}

inline Rational rational_pow(const Rational& base, long long exponent) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  using boost::multiprecision::pow;
  if (exponent == 0) return Rational(1);
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return rational_pow(Rational(denominator(base), numerator(base)), -exponent);
  }
  auto e = static_cast<unsigned>(exponent);
  return Rational(pow(numerator(base), e), pow(denominator(base), e));
}

/// A real number that is either an exact rational or a long double
/// approximation. Arithmetic stays exact while both operands are exact.
class Real {
 public:
  Real() = default;
  Real(Rational q) : exact_(true), q_(std::move(q)) {}  // NOLINT(implicit)
  Real(int v) : exact_(true), q_(v) {}                   // NOLINT(implicit)

  static Real approx(long double x) {
    Real r;
    r.exact_ = false;
    r.x_ = x;
    return r;
  }

  bool is_exact() const noexcept { return exact_; }

  const Rational& rational() const {
    if (!exact_) throw std::logic_error("Real::rational on an approximate value");
    return q_;
  }

  long double value() const { return exact_ ? to_long_double(q_) : x_; }

  bool is_zero() const { return exact_ ? q_ == 0 : x_ == 0.0L; }

  /// Strictly positive; approximate values are compared against `tol`.
  bool positive(long double tol = 0.0L) const {
    return exact_ ? q_ > 0 : x_ > tol;
  }

  std::string str() const {
    return exact_ ? to_string(q_) : format_decimal(x_);
  }

  Real pow(long long exponent) const {
    if (exact_) return Real(rational_pow(q_, exponent));
    return approx(std::pow(x_, static_cast<long double>(exponent)));
  }

  friend Real operator+(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(a.q_ + b.q_);
    return approx(a.value() + b.value());
  }
  friend Real operator-(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(a.q_ - b.q_);
    return approx(a.value() - b.value());
  }
  friend Real operator*(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(a.q_ * b.q_);
    return approx(a.value() * b.value());
  }
  friend Real operator/(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) {
      if (b.q_ == 0) throw std::domain_error("division by zero");
      return Real(a.q_ / b.q_);
    }
    return approx(a.value() / b.value());
  }
  Real operator-() const { return exact_ ? Real(-q_) : approx(-x_); }
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }
  Real& operator/=(const Real& o) { return *this = *this / o; }

  /// Exact equality when both are exact, otherwise absolute tolerance.
  bool near(const Real& o, long double tol) const {
    if (exact_ && o.exact_) return q_ == o.q_;
    return std::fabs(value() - o.value()) <= tol;
  }

 private:
  bool exact_ = true;
  Rational q_ = 0;
  long double x_ = 0.0L;
};

using RealVector = std::vector<Real>;

/// Eigenvalue-like quantity: exact rational, or an approximation carrying a
/// bound on the eigenpair residual ||A x - lambda x||_inf for a unit-max x.
struct NumericValue {
  Real value;
  long double residual_bound = 0.0L;
  /// Collatz-Wielandt bracket; equals [value, value] in exact mode.
  long double lower = 0.0L;
  long double upper = 0.0L;

  static NumericValue exact(Rational q) {
    long double x = to_long_double(q);
    return {Real(std::move(q)), 0.0L, x, x};
  }

  bool is_exact() const { return value.is_exact(); }
  long double approx() const { return value.value(); }

  std::string str() const {
    if (is_exact()) return value.str();
    std::ostringstream os;
    os << format_decimal(value.value()) << "±" << std::setprecision(2)
       << std::scientific << static_cast<double>(residual_bound);
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Integer matrices

inline IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, IntVector(cols, BigInt(0)));
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t = zero_matrix(m[0].size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  if (a[0].size() != b.size()) throw DimensionMismatch("matrix product shape mismatch");
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMatrix c = zero_matrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

inline IntVector multiply(const IntMatrix& a, const IntVector& x) {
  IntVector y(a.size(), BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw DimensionMismatch("matrix-vector shape mismatch");
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

inline IntMatrix matrix_power(const IntMatrix& m, unsigned long long k) {
  IntMatrix result = identity_matrix(m.size());
  IntMatrix base = m;
  while (k > 0) {
    if (k & 1ULL) result = multiply(result, base);
    k >>= 1ULL;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

inline BigInt row_sum(const IntMatrix& m, std::size_t row) {
  BigInt s = 0;
  for (const auto& x : m[row]) s += x;
  return s;
}

inline BigInt column_sum(const IntMatrix& m, std::size_t col) {
  BigInt s = 0;
  for (const auto& row : m) s += row[col];
  return s;
}

inline long double infinity_norm(const IntMatrix& m) {
  long double best = 0.0L;
  for (std::size_t i = 0; i < m.size(); ++i)
    best = std::max(best, to_long_double(row_sum(m, i)));
  return best;
}

inline IntMatrix submatrix(const IntMatrix& m, const std::vector<std::size_t>& idx) {
  IntMatrix s = zero_matrix(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s[i][j] = m[idx[i]][idx[j]];
  return s;
}

/// Coefficients c[0..N] of det(zI - A) = sum_k c[k] z^k, c[N] = 1, computed
/// exactly with the Faddeev-LeVerrier recursion.
inline IntVector characteristic_polynomial(const IntMatrix& a) {
  const std::size_t n = a.size();
  IntVector c(n + 1, BigInt(0));
  c[n] = 1;
  IntMatrix m = zero_matrix(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = multiply(a, m);
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    m = std::move(next);
    IntMatrix am = multiply(a, m);
    BigInt trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am[i][i];
    if (trace % BigInt(k) != 0) throw std::logic_error("non-integral Faddeev-LeVerrier step");
    c[n - k] = -trace / BigInt(k);
  }
  return c;
}

inline BigInt evaluate_polynomial(const IntVector& coeffs, const BigInt& z) {
  BigInt acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

// ---------------------------------------------------------------------------
// Exact rational linear algebra

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) r[i].emplace_back(x);
  return r;
}

inline RatVector to_rational(const IntVector& v) {
  RatVector r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Basis of the right kernel of `m`.
inline std::vector<RatVector> kernel(RatMatrix m) {
  if (m.empty()) return {};
  const std::size_t cols = m[0].size();
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of m x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero.
inline std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b) {
  if (m.size() != b.size()) throw DimensionMismatch("solve: rhs size mismatch");
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  RatMatrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RatVector x(cols, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

// ---------------------------------------------------------------------------
// long double dense solver (partial pivoting)

inline std::optional<LdVector> solve(LdMatrix m, LdVector b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    if (m[p][c] == 0.0L) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      long double f = m[r][c] / m[c][c];
      if (f == 0.0L) continue;
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
      b[r] -= f * b[c];
    }
  }
  LdVector x(n, 0.0L);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

inline LdMatrix to_long_double(const IntMatrix& m) {
  LdMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) r[i].push_back(to_long_double(x));
  return r;
}

inline BigInt gcd(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

}  // namespace bratteli
