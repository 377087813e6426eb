#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hnpoly {

namespace detail {

using int128 = __int128;
using uint128 = unsigned __int128;

inline uint128 uabs128(int128 x) {
  return x < 0 ? -static_cast<uint128>(x) : static_cast<uint128>(x);
}

inline uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// Exact rational with 64-bit numerator and positive 64-bit denominator,
/// always kept in lowest terms.  Arithmetic runs through 128-bit
/// intermediates; a result that does not reduce back into 64 bits throws
/// std::overflow_error instead of silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long n) : num_(n) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) { *this = reduce(num, den); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Nearest rational with denominator 2^bits.  Used to snap floating-point
  /// breakpoints onto an exact grid where an exact value is not available.
  static Rational dyadic(double x, int bits = 40);

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;  // num_ == LLONG_MIN cannot occur: reduce() rejects it
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    using detail::int128;
    return reduce(int128(a.num_) * b.den_ + int128(b.num_) * a.den_,
                  int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    using detail::int128;
    return reduce(int128(a.num_) * b.den_ - int128(b.num_) * a.den_,
                  int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    using detail::int128;
    return reduce(int128(a.num_) * b.num_, int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    using detail::int128;
    if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return reduce(int128(a.num_) * b.den_, int128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    using detail::int128;
    int128 lhs = int128(a.num_) * b.den_;
    int128 rhs = int128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static Rational reduce(detail::int128 num, detail::int128 den);

  long long num_{0};
  long long den_{1};
};

inline Rational Rational::reduce(detail::int128 num, detail::int128 den) {
  using namespace detail;
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational();
  uint128 g = gcd128(uabs128(num), static_cast<uint128>(den));
  num /= static_cast<int128>(g);
  den /= static_cast<int128>(g);
  constexpr int128 kMax = 0x7fffffffffffffffLL;
  if (num > kMax || num < -kMax || den > kMax)
    throw std::overflow_error("Rational: value does not fit in 64 bits");
  Rational r;
  r.num_ = static_cast<long long>(num);
  r.den_ = static_cast<long long>(den);
  return r;
}

inline Rational Rational::dyadic(double x, int bits) {
  if (bits < 0 || bits > 62) throw std::invalid_argument("Rational::dyadic: bits out of range");
  long long den = 1LL << bits;
  double scaled = x * static_cast<double>(den);
  if (!(scaled >= -9.0e18 && scaled <= 9.0e18))
    throw std::overflow_error("Rational::dyadic: value out of range");
  return Rational(static_cast<long long>(std::llround(scaled)), den);
}

}  // namespace hnpoly
