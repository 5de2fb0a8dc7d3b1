#include "paradox/dyadic.hpp"

#include <cctype>
#include <functional>

#include "paradox/errors.hpp"

namespace paradox {

namespace {

std::string_view trim(std::string_view s, std::size_t& offset) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

BigInt parse_integer(std::string_view s, std::size_t offset) {
  s = trim(s, offset);
  if (s.empty()) throw ParseError("expected an integer", offset);
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw ParseError("expected digits", offset + i);
  BigInt value = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw ParseError(std::string("unexpected character '") + s[i] + "' in integer", offset + i);
    }
    value = value * 10 + (s[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

// Parses a denominator, either a decimal integer or "2^k".
BigInt parse_denominator(std::string_view s, std::size_t offset) {
  std::size_t local = offset;
  std::string_view t = trim(s, local);
  if (t.size() > 2 && t[0] == '2' && t[1] == '^') {
    BigInt k = parse_integer(t.substr(2), local + 2);
    if (k < 0 || k > 4096) throw ParseError("exponent out of range", local + 2);
    return BigInt(1) << static_cast<unsigned>(k);
  }
  return parse_integer(t, local);
}

}  // namespace

Dyadic::Dyadic(BigInt num, std::int64_t exp) : num_(std::move(num)), exp_(exp) {
  normalize();
}

Dyadic Dyadic::pow2(std::int64_t k) { return Dyadic(BigInt(1), -k); }

void Dyadic::normalize() {
  if (num_.is_zero()) {
    exp_ = 0;
    return;
  }
  if (exp_ < 0) {
    num_ <<= static_cast<unsigned>(-exp_);
    exp_ = 0;
    return;
  }
  if (exp_ > 0) {
    std::int64_t tz = static_cast<std::int64_t>(boost::multiprecision::lsb(abs(num_)));
    std::int64_t shift = std::min(tz, exp_);
    num_ >>= static_cast<unsigned>(shift);
    exp_ -= shift;
  }
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.num_ = -r.num_;
  return r;
}

Dyadic operator+(const Dyadic& x, const Dyadic& y) {
  if (x.exp_ == y.exp_) return Dyadic(x.num_ + y.num_, x.exp_);
  if (x.exp_ > y.exp_) {
    return Dyadic(x.num_ + (y.num_ << static_cast<unsigned>(x.exp_ - y.exp_)), x.exp_);
  }
  return Dyadic((x.num_ << static_cast<unsigned>(y.exp_ - x.exp_)) + y.num_, y.exp_);
}

Dyadic operator-(const Dyadic& x, const Dyadic& y) { return x + (-y); }

Dyadic operator*(const Dyadic& x, const Dyadic& y) {
  return Dyadic(x.num_ * y.num_, x.exp_ + y.exp_);
}

Dyadic Dyadic::shifted(std::int64_t k) const { return Dyadic(num_, exp_ - k); }

Rational Dyadic::to_rational() const {
  return Rational(num_, BigInt(1) << static_cast<unsigned>(exp_));
}

std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
  const Dyadic d = x - y;
  if (d.sign() < 0) return std::strong_ordering::less;
  if (d.sign() > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::to_string() const {
  std::string s = num_.str();
  if (exp_ > 0) s += "/" + (BigInt(1) << static_cast<unsigned>(exp_)).str();
  return s;
}

Dyadic Dyadic::parse(std::string_view text, std::size_t offset) {
  const Rational q = parse_rational(text, offset);
  const BigInt den = boost::multiprecision::denominator(q);
  const auto k = boost::multiprecision::msb(den);
  if (den != (BigInt(1) << k)) {
    throw ParseError("denominator of '" + std::string(text) + "' is not a power of two", offset);
  }
  return Dyadic(boost::multiprecision::numerator(q), static_cast<std::int64_t>(k));
}

std::size_t Dyadic::hash() const {
  const BigInt mag = abs(num_);
  const auto low = static_cast<std::uint64_t>(mag & BigInt(0xFFFFFFFFFFFFFFFFull));
  std::size_t h = std::hash<std::uint64_t>{}(low);
  h ^= std::hash<std::int64_t>{}(exp_ * 31 + num_.sign()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

Rational parse_rational(std::string_view text, std::size_t offset) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, offset));
  const BigInt num = parse_integer(text.substr(0, slash), offset);
  const BigInt den = parse_denominator(text.substr(slash + 1), offset + slash + 1);
  if (den <= 0) throw ParseError("denominator must be positive", offset + slash + 1);
  return Rational(num, den);
}

std::string rational_to_string(const Rational& q) {
  const BigInt den = boost::multiprecision::denominator(q);
  std::string s = boost::multiprecision::numerator(q).str();
  if (den != 1) s += "/" + den.str();
  return s;
}

}  // namespace paradox
