#include "gfl/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "gfl/error.hpp"

namespace gfl {

std::string_view to_string(NumericMode mode) {
  return mode == NumericMode::rational ? "rational" : "float";
}

NumericMode parse_numeric_mode(std::string_view text) {
  if (text == "rational" || text == "exact") return NumericMode::rational;
  if (text == "float" || text == "floating") return NumericMode::floating;
  throw ParseError("unknown numeric mode '" + std::string(text) + "'");
}

Scalar Scalar::ratio(long num, long den) {
  if (den == 0) throw ArgumentError("zero denominator");
  return Scalar(mpq_class(mpz_class(num), mpz_class(den)));
}

Scalar Scalar::ratio(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ArgumentError("zero denominator");
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t first = 0;
  while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
  s = s.substr(first);
  if (s.empty()) throw ParseError("empty number");
  const bool decimal = s.find_first_of(".eEn") != std::string::npos;
  if (!decimal) {
    if (s.front() == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return Scalar(q);
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "'");
  return Scalar(v);
}

const mpq_class& Scalar::rational() const {
  if (!is_exact()) throw DomainError("scalar is not exact");
  return std::get<mpq_class>(value_);
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

bool Scalar::is_zero() const { return sign() == 0; }

int Scalar::sign() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return sgn(*q);
  const double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) {
    return q->get_str();
  }
  const double d = std::get<double>(value_) + 0.0;
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

namespace {

template <class ExactOp, class FloatOp>
void combine(std::variant<mpq_class, double>& lhs, const std::variant<mpq_class, double>& rhs,
             ExactOp exact, FloatOp flt) {
  auto* lq = std::get_if<mpq_class>(&lhs);
  const auto* rq = std::get_if<mpq_class>(&rhs);
  if (lq && rq) {
    exact(*lq, *rq);
    return;
  }
  const double a = lq ? lq->get_d() : std::get<double>(lhs);
  const double b = rq ? rq->get_d() : std::get<double>(rhs);
  lhs = flt(a, b);
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& rhs) {
  combine(value_, rhs.value_, [](mpq_class& a, const mpq_class& b) { a += b; },
          [](double a, double b) { return a + b; });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  combine(value_, rhs.value_, [](mpq_class& a, const mpq_class& b) { a -= b; },
          [](double a, double b) { return a - b; });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  combine(value_, rhs.value_, [](mpq_class& a, const mpq_class& b) { a *= b; },
          [](double a, double b) { return a * b; });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (rhs.is_exact() && rhs.is_zero() && is_exact()) throw DomainError("division by zero");
  combine(value_, rhs.value_, [](mpq_class& a, const mpq_class& b) { a /= b; },
          [](double a, double b) { return a / b; });
  return *this;
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<mpq_class>(&value_)) return Scalar(mpq_class(-*q));
  return Scalar(-std::get<double>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    const int c = cmp(a.rational(), b.rational());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return a.to_double() <=> b.to_double();
}

Scalar abs(const Scalar& x) { return x.sign() < 0 ? -x : x; }

double log(const Scalar& x) {
  if (x.sign() < 0) return std::numeric_limits<double>::quiet_NaN();
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  if (!x.is_exact()) return std::log(x.to_double());
  // Split off powers of two so huge or tiny rationals do not overflow a double.
  const mpq_class& q = x.rational();
  long num_exp = 0;
  long den_exp = 0;
  const double num = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
  return std::log(num) - std::log(den) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

bool approx_equal(const Scalar& a, const Scalar& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  const double x = a.to_double();
  const double y = b.to_double();
  if (x == y) return true;
  const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
  return std::fabs(x - y) <= tol * scale;
}

double distance(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return abs(a - b).to_double();
  return std::fabs(a.to_double() - b.to_double());
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.str(); }

}  // namespace gfl
