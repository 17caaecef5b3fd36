#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "kl_affine/errors.hpp"

namespace kl_affine {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses `p` or `p/q` (q > 0) into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw Error(ErrorKind::ParseError, "bad rational '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string_view s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text)) fail();
    return Rational(BigInt(std::string(strip_plus(text))));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+') fail();
  BigInt d{std::string(den)};
  if (d == 0) fail();
  Rational r(BigInt(std::string(strip_plus(num))), d);
  r.canonicalize();
  return r;
}

inline std::string format_rational(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline BigInt floor_of(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline BigInt ceil_of(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Element a + b*sqrt(2) of the ordered field Q(sqrt 2). All comparisons are exact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  Scalar(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static Scalar sqrt2() { return Scalar(Rational(0), Rational(1)); }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt2_part() const { return b_; }

  bool is_rational() const { return b_ == 0; }
  bool is_integer() const { return b_ == 0 && kl_affine::is_integer(a_); }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// -1, 0 or +1.
  int sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare a^2 with 2 b^2.
    const Rational lhs = a_ * a_;
    const Rational rhs = 2 * b_ * b_;
    return lhs > rhs ? sa : sb;
  }

  Scalar operator-() const { return Scalar(-a_, -b_); }
  Scalar& operator+=(const Scalar& o) { a_ += o.a_; b_ += o.b_; return *this; }
  Scalar& operator-=(const Scalar& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  Scalar& operator*=(const Scalar& o) {
    Rational na = a_ * o.a_ + 2 * b_ * o.b_;
    Rational nb = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    const Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    if (norm == 0) throw std::domain_error("Scalar division by zero");
    *this *= Scalar(o.a_ / norm, -o.b_ / norm);
    return *this;
  }

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend std::strong_ordering operator<=>(const Scalar& x, const Scalar& y) {
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  /// Exact integer value; requires is_integer().
  BigInt to_integer() const { return a_.get_num(); }

  /// Text form `p/q[+r/s*t]`, `t` standing for sqrt(2).
  std::string to_string() const {
    std::string out = format_rational(a_);
    if (b_ != 0) out += "+" + format_rational(b_) + "*t";
    return out;
  }

  static Scalar parse(std::string_view text) {
    const auto star = text.find("*t");
    if (star == std::string_view::npos) return Scalar(parse_rational(text));
    if (star + 2 != text.size()) throw Error(ErrorKind::ParseError, "trailing text after '*t' in '" + std::string(text) + "'");
    // Split at the '+' separating the rational part; skip a leading sign.
    const auto plus = text.find('+', 1);
    if (plus == std::string_view::npos || plus > star)
      throw Error(ErrorKind::ParseError, "expected '<rat>+<rat>*t' in '" + std::string(text) + "'");
    return Scalar(parse_rational(text.substr(0, plus)), parse_rational(text.substr(plus + 1, star - plus - 1)));
  }

  std::size_t hash() const { return std::hash<std::string>{}(to_string()); }

 private:
  Rational a_{0};
  Rational b_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace kl_affine
