#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "leakmip/error.hpp"

namespace leakmip {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidInput("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline Rational pow2(unsigned bits) { return Rational(BigInt(1) << bits); }

/// Always "p/q", including integers ("1/1").
inline std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

/// Parses "p/q" or a plain integer.
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InvalidInput("not a rational number: '" + text + "'");
  }
}

/// An exact probability in [0, 1].
class Value {
public:
  Value() = default;

  explicit Value(Rational exact) : exact_(std::move(exact)) {
    if (exact_ < 0 || exact_ > 1) throw InvalidInput("value out of [0,1]: " + to_fraction_string(exact_));
  }

  static Value from_weights(std::uint64_t num, std::uint64_t den) { return Value(make_rational(num, den)); }

  /// min(1, r) for r >= 0.
  static Value clamped(const Rational& r) { return r > 1 ? Value(Rational(1)) : Value(r); }

  const Rational& exact() const noexcept { return exact_; }
  double to_double() const { return exact_.convert_to<double>(); }
  std::string str() const { return to_fraction_string(exact_); }

  friend bool operator==(const Value& a, const Value& b) { return a.exact_ == b.exact_; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.exact_ < b.exact_) return std::strong_ordering::less;
    if (a.exact_ > b.exact_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

private:
  Rational exact_{0};
};

}  // namespace leakmip
