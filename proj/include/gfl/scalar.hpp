#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace gfl {

enum class NumericMode { rational, floating };

inline constexpr double kDefaultTolerance = 1e-12;

std::string_view to_string(NumericMode mode);
NumericMode parse_numeric_mode(std::string_view text);

/// A probability-like number that is either an exact rational or a double.
///
/// Arithmetic between two exact values stays exact. As soon as a floating
/// operand takes part the result is floating. Equality via `operator==` is
/// structural; use `approx_equal` when a tolerance should apply.
class Scalar {
 public:
  Scalar() : value_(mpq_class(0)) {}
  Scalar(int v) : value_(mpq_class(v)) {}  // NOLINT(google-explicit-constructor)
  Scalar(long v) : value_(mpq_class(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class v) : value_(std::move(v)) { std::get<mpq_class>(value_).canonicalize(); }
  explicit Scalar(double v) : value_(v) {}

  static Scalar ratio(long num, long den);
  static Scalar ratio(const mpz_class& num, const mpz_class& den);
  /// Parses `p/q`, an integer, or a decimal literal (the last is floating).
  static Scalar parse(std::string_view text);

  [[nodiscard]] bool is_exact() const { return std::holds_alternative<mpq_class>(value_); }
  [[nodiscard]] NumericMode mode() const { return is_exact() ? NumericMode::rational : NumericMode::floating; }
  [[nodiscard]] const mpq_class& rational() const;
  [[nodiscard]] double to_double() const;

  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] int sign() const;

  /// `p/q` in rational mode, 17 significant digits otherwise.
  [[nodiscard]] std::string str() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  std::variant<mpq_class, double> value_;
};

Scalar abs(const Scalar& x);
/// Natural logarithm; always floating. ln(0) is -inf.
double log(const Scalar& x);

/// Exact equality for two rationals; relative comparison otherwise,
/// |a-b| <= tol * max(1, |a|, |b|).
bool approx_equal(const Scalar& a, const Scalar& b, double tol = kDefaultTolerance);

/// |a - b| as a double, exact before conversion when both are rational.
double distance(const Scalar& a, const Scalar& b);

std::ostream& operator<<(std::ostream& os, const Scalar& x);

}  // namespace gfl
