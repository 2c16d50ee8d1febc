#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace netbrd {

// Exact arithmetic scalar for cycle certification and rational-mode solves.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <class S>
inline constexpr bool is_exact_scalar = std::is_same_v<S, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline bool finite_value(double x) { return std::isfinite(x); }
inline bool finite_value(const Rational&) { return true; }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

template <class S>
int sign_of(const S& x) {
  return x > S(0) ? 1 : (x < S(0) ? -1 : 0);
}

// Every finite double is a dyadic rational; the conversion is exact.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot convert non-finite value to rational");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(x, &exp);
  const auto mant = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  BigInt num(mant);
  if (exp >= 0) {
    num <<= exp;
    return Rational(num);
  }
  BigInt den(1);
  den <<= -exp;
  return Rational(num, den);
}

template <class S>
S scalar_from_double(double x);
template <>
inline double scalar_from_double<double>(double x) { return x; }
template <>
inline Rational scalar_from_double<Rational>(double x) { return rational_from_double(x); }

template <class S>
S scalar_from_int(long long v) { return S(v); }

// Round-trip-safe decimal form (17 significant digits).
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string format_rational(const Rational& q) {
  const BigInt num = numerator(q);
  const BigInt den = denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts "p/q", plain integers, and decimal/scientific literals (parsed exactly).
Rational parse_rational(const std::string& text);

double parse_double(const std::string& text);

template <class S>
std::string format_scalar(const S& v) {
  if constexpr (is_exact_scalar<S>) {
    return format_rational(v);
  } else {
    return format_double(v);
  }
}

template <class S>
S parse_scalar(const std::string& text);
template <>
inline double parse_scalar<double>(const std::string& text) { return parse_double(text); }
template <>
inline Rational parse_scalar<Rational>(const std::string& text) { return parse_rational(text); }

}  // namespace netbrd
