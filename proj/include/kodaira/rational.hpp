#pragma once

// Exact rationals over arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kodaira {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
 public:
  Rational() = default;
  Rational(long long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    // Boost 1.74 rejects a negative denominator instead of normalising it
    value_ = den < 0 ? Backend(-num, -den) : Backend(num, den);
  }

  /// Accepts "p", "-p", "p/q"; surrounding whitespace is ignored.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto first = s.find_first_not_of(" \t\n");
    auto last = s.find_last_not_of(" \t\n");
    if (first == std::string::npos) throw std::invalid_argument("empty rational");
    s = s.substr(first, last - first + 1);
    auto slash = s.find('/');
    auto parse_int = [](const std::string& part) {
      if (part.empty()) throw std::invalid_argument("malformed rational");
      std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
      if (i == part.size()) throw std::invalid_argument("malformed rational");
      for (std::size_t k = i; k < part.size(); ++k)
        if (part[k] < '0' || part[k] > '9') throw std::invalid_argument("malformed rational: " + part);
      return BigInt(part[0] == '+' ? part.substr(1) : part);
    };
    if (slash == std::string::npos) return Rational(parse_int(s));
    BigInt den = parse_int(s.substr(slash + 1));
    if (den <= 0) throw std::invalid_argument("rational denominator must be positive");
    return Rational(parse_int(s.substr(0, slash)), den);
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return value_ < 0 ? -1 : (value_ > 0 ? 1 : 0); }

  std::string str() const {
    if (is_integer()) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  long long to_int64() const {
    if (!is_integer()) throw std::domain_error("rational " + str() + " is not an integer");
    return numerator().convert_to<long long>();
  }

  Rational operator-() const { return from_backend(-value_); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using Backend = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                                boost::multiprecision::et_off>;
  static Rational from_backend(Backend v) {
    Rational r;
    r.value_ = std::move(v);
    return r;
  }
  Backend value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

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

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  BigInt g = gcd(a, b);
  BigInt r = a / g * b;
  return r < 0 ? BigInt(-r) : r;
}

}  // namespace kodaira
