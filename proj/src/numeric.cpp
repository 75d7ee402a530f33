#include "hypme/numeric.hpp"

#include <cctype>
#include <cmath>

#include "hypme/error.hpp"

namespace hypme {

namespace mp = boost::multiprecision;

namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;
const Rational kTwoPow32 = Rational(BigInt(1) << 32);

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
  BigInt v = 0;
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("invalid number '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

bool is_power_of_two(const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; }

std::size_t bit_length(const BigInt& v) { return v == 0 ? 0 : mp::msb(v) + 1; }

}  // namespace

std::string to_string(const Rational& r) {
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

std::string to_string(const BigInt& v) { return v.str(); }

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational value;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos && s.find('/') == std::string_view::npos) {
    auto exp_text = s.substr(e + 1);
    bool neg_exp = !exp_text.empty() && exp_text.front() == '-';
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) exp_text.remove_prefix(1);
    BigInt k = parse_integer(exp_text, text);
    if (k > 100000) throw ParseError("exponent too large in '" + std::string(text) + "'");
    Rational mantissa = parse_rational(s.substr(0, e));
    if (mantissa < 0 || s.substr(0, e).find_first_of("+-") != std::string_view::npos)
      throw ParseError("invalid number '" + std::string(text) + "'");
    Rational scale = pow(Rational(10), k.convert_to<std::uint64_t>());
    value = neg_exp ? Rational(mantissa / scale) : Rational(mantissa * scale);
  } else if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    value = Rational(parse_integer(s.substr(0, slash), text), den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    BigInt whole = int_part.empty() ? BigInt(0) : parse_integer(int_part, text);
    BigInt frac = frac_part.empty() ? BigInt(0) : parse_integer(frac_part, text);
    if (int_part.empty() && frac_part.empty())
      throw ParseError("invalid number '" + std::string(text) + "'");
    BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(frac_part.size()));
    value = Rational(whole * scale + frac, scale);
  } else {
    value = Rational(parse_integer(s, text));
  }
  return negative ? Rational(-value) : value;
}

long double to_long_double(const Rational& r) {
  const BigInt& num = mp::numerator(r);
  const BigInt& den = mp::denominator(r);
  if (num == 0) return 0.0L;
  BigInt mag = mp::abs(num);
  // Keep 64 significant bits of each side so the conversion cannot overflow.
  long shift_n = std::max(0L, static_cast<long>(bit_length(mag)) - 64);
  long shift_d = std::max(0L, static_cast<long>(bit_length(den)) - 64);
  BigInt n_top = mag >> shift_n;
  BigInt d_top = den >> shift_d;
  long double v = n_top.convert_to<long double>() / d_top.convert_to<long double>();
  v = std::ldexp(v, static_cast<int>(shift_n - shift_d));
  return num < 0 ? -v : v;
}

Rational from_long_double(long double v) {
  if (!std::isfinite(v)) throw Error("non-finite value cannot be represented exactly");
  if (v == 0.0L) return Rational(0);
  int exponent = 0;
  long double m = std::frexp(std::fabs(v), &exponent);
  auto mantissa = static_cast<std::uint64_t>(std::ldexp(m, 64));
  Rational r = Rational(BigInt(mantissa));
  int shift = exponent - 64;
  if (shift > 0)
    r *= Rational(BigInt(1) << shift);
  else if (shift < 0)
    r /= Rational(BigInt(1) << -shift);
  return v < 0 ? Rational(-r) : r;
}

BigInt floor(const Rational& r) {
  const BigInt& num = mp::numerator(r);
  const BigInt& den = mp::denominator(r);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt f = floor(r);
  return Rational(f) == r ? f : BigInt(f + 1);
}

long double log_big(const BigInt& v) {
  if (v <= 0) throw PreconditionError("log of a non-positive integer");
  std::size_t bits = bit_length(v);
  if (bits <= 63) return std::log(v.convert_to<long double>());
  std::size_t shift = bits - 63;
  BigInt top = v >> shift;
  return std::log(top.convert_to<long double>()) + static_cast<long double>(shift) * kLn2;
}

long double log_rational(const Rational& r) {
  if (r <= 0) throw PreconditionError("log of a non-positive rational");
  return log_big(mp::numerator(r)) - log_big(mp::denominator(r));
}

Rational pow(const Rational& base, std::uint64_t exponent) {
  auto e = static_cast<unsigned>(exponent);
  return Rational(mp::pow(mp::numerator(base), e), mp::pow(mp::denominator(base), e));
}

std::optional<std::int64_t> exact_log2(const Rational& x) {
  const BigInt& num = mp::numerator(x);
  const BigInt& den = mp::denominator(x);
  if (!is_power_of_two(num) || !is_power_of_two(den)) return std::nullopt;
  return static_cast<std::int64_t>(mp::msb(num)) - static_cast<std::int64_t>(mp::msb(den));
}

Rational log2_upper(const Rational& x) {
  if (x < 1) throw PreconditionError("log2_upper expects an argument >= 1");
  if (auto k = exact_log2(x)) return Rational(*k);
  long double v = log_rational(x) / kLn2;
  long double scaled = std::ceil(std::ldexp(v, 32)) + 1.0L;
  return from_long_double(scaled) / kTwoPow32;
}

Rational ln_upper(const Rational& x) {
  if (x == 1) return Rational(0);
  long double scaled = std::ceil(std::ldexp(log_rational(x), 32)) + 1.0L;
  return from_long_double(scaled) / kTwoPow32;
}

Rational ln_lower(const Rational& x) {
  if (x == 1) return Rational(0);
  long double scaled = std::floor(std::ldexp(log_rational(x), 32)) - 1.0L;
  return from_long_double(scaled) / kTwoPow32;
}

std::optional<int> compare_with_scaled_log2(const Rational& lhs, const Rational& coeff,
                                            const Rational& arg) {
  if (arg < 1) throw PreconditionError("compare_with_scaled_log2 expects arg >= 1");
  if (coeff < 0) throw PreconditionError("compare_with_scaled_log2 expects coeff >= 0");
  auto sign = [](const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  if (coeff == 0 || arg == 1) return sign(lhs);
  if (lhs <= 0) return -1;

  Rational t = lhs / coeff;
  const BigInt& a = mp::numerator(t);
  const BigInt& b = mp::denominator(t);
  const BigInt& p = mp::numerator(arg);
  const BigInt& q = mp::denominator(arg);
  if (a <= (1 << 20) && b <= (1 << 12)) {
    auto ai = a.convert_to<unsigned>();
    auto bi = b.convert_to<unsigned>();
    std::size_t bits = (bit_length(p) + bit_length(q)) * bi + ai;
    if (bits <= (std::size_t{1} << 23)) {
      BigInt left = (BigInt(1) << ai) * mp::pow(q, bi);
      BigInt right = mp::pow(p, bi);
      return left > right ? 1 : (left < right ? -1 : 0);
    }
  }
  long double l = to_long_double(lhs);
  long double r = to_long_double(coeff) * (log_rational(arg) / kLn2);
  long double tol = 1e-15L * std::max({std::fabs(l), std::fabs(r), 1.0L});
  if (std::fabs(l - r) <= tol) return std::nullopt;
  return l > r ? 1 : -1;
}

RationalInterval enclose(long double v) {
  if (!std::isfinite(v)) throw Error("numeric value overflowed extended precision");
  if (v == 0.0L) return RationalInterval::exact(Rational(0));
  long double margin = std::fabs(v) * 1e-15L;
  return {from_long_double(v - margin), from_long_double(v + margin)};
}

}  // namespace hypme
