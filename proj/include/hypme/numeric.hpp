#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hypme {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" with q >= 1; integers are written "p/1".
std::string to_string(const Rational& r);
std::string to_string(const BigInt& v);

/// Accepts "p/q", "p", finite decimals such as "-0.25", and "1e30", "2.5e-3".
Rational parse_rational(std::string_view text);

long double to_long_double(const Rational& r);
/// Exact value of a finite long double.
Rational from_long_double(long double v);

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

/// Natural log of a positive big integer / rational, safe for huge values.
long double log_big(const BigInt& v);
long double log_rational(const Rational& r);

/// Exact rational power with a non-negative integer exponent.
Rational pow(const Rational& base, std::uint64_t exponent);

/// log2(x) for x >= 1, exact when x is a power of two, otherwise rounded up
/// to a multiple of 2^-32 (the result is never below the true value).
Rational log2_upper(const Rational& x);
/// Natural log rounded up (resp. down) to a multiple of 2^-32; x > 0.
Rational ln_upper(const Rational& x);
Rational ln_lower(const Rational& x);

/// If x = 2^k exactly (k possibly negative), returns k.
std::optional<std::int64_t> exact_log2(const Rational& x);

/// Sign of lhs - coeff * log2(arg), decided exactly by integer comparison
/// for arg >= 1 and coeff >= 0. Falls back to extended precision when the
/// exponents involved are too large; std::nullopt means that fallback could
/// not separate the two values.
std::optional<int> compare_with_scaled_log2(const Rational& lhs, const Rational& coeff,
                                            const Rational& arg);

/// Closed rational interval, used where a value is only known to bounded precision.
struct RationalInterval {
  Rational lo;
  Rational hi;

  static RationalInterval exact(const Rational& v) { return {v, v}; }
  bool is_exact() const { return lo == hi; }
};

/// Encloses a long double computed with at most a few ulps of error.
RationalInterval enclose(long double v);

}  // namespace hypme
