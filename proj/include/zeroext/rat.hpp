#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <ostream>
#include <string>

#include "zeroext/error.hpp"

namespace zeroext {

// Exact rational with canonical form (coprime, positive denominator).
// Stored in 64 bits with 128-bit intermediates; anything that would not fit
// back into 64 bits raises Error("Overflow") instead of silently rounding.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rat(long long n, long long d) {
    if (d == 0) fail("DivisionByZero", "rational with zero denominator");
    init(static_cast<__int128>(n), static_cast<__int128>(d));
  }

  long long num() const noexcept { return num_; }
  long long den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  int sign() const noexcept { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) fail("DivisionByZero", "rational division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  // Smallest integer >= *this.
  long long ceil() const {
    long long q = num_ / den_;
    if (num_ > 0 && num_ % den_ != 0) ++q;
    return q;
  }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  using i128 = __int128;

  void init(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    num_ = narrow(n);
    den_ = narrow(d);
  }

  static Rat make(i128 n, i128 d) {
    Rat r;
    r.init(n, d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  static long long narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) fail("Overflow", "rational out of 64-bit range");
    return static_cast<long long>(v);
  }

  long long num_;
  long long den_;
};

// Parses "p", "-p" or "p/q".
inline Rat parse_rat(const std::string& token) {
  auto bad = [&]() { fail("ParseError", "bad rational '" + token + "'"); };
  if (token.empty()) bad();
  std::size_t slash = token.find('/');
  try {
    std::size_t used = 0;
    long long n = std::stoll(token.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? token.size() : slash)) bad();
    if (slash == std::string::npos) return Rat(n);
    long long d = std::stoll(token.substr(slash + 1), &used);
    if (used != token.size() - slash - 1 || d <= 0) bad();
    return Rat(n, d);
  } catch (const std::logic_error&) {
    bad();
  }
  return Rat();  // unreachable
}

}  // namespace zeroext
