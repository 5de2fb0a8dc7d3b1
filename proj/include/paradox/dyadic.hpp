#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace paradox {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact dyadic rational num / 2^exp, kept in lowest terms:
// exp >= 0, and num is odd whenever exp > 0. Zero is (0, 0).
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Dyadic(BigInt num, std::int64_t exp);

  static Dyadic pow2(std::int64_t k);

  const BigInt& numerator() const { return num_; }
  std::int64_t exponent() const { return exp_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  Dyadic operator-() const;
  friend Dyadic operator+(const Dyadic& x, const Dyadic& y);
  friend Dyadic operator-(const Dyadic& x, const Dyadic& y);
  friend Dyadic operator*(const Dyadic& x, const Dyadic& y);

  // Multiplication by 2^k, k of either sign.
  Dyadic shifted(std::int64_t k) const;

  Rational to_rational() const;

  friend bool operator==(const Dyadic& x, const Dyadic& y) = default;
  friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y);

  // "p" or "p/q" with q = 2^exp written in decimal.
  std::string to_string() const;

  // Accepts "p", "p/q" (q a power of two) and "p/2^k".
  static Dyadic parse(std::string_view text, std::size_t offset = 0);

  std::size_t hash() const;

 private:
  void normalize();

  BigInt num_ = 0;
  std::int64_t exp_ = 0;
};

// Parses "p" or "p/q" into an exact rational.
Rational parse_rational(std::string_view text, std::size_t offset = 0);
std::string rational_to_string(const Rational& q);

}  // namespace paradox
