#include "hypme/integrability.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "hypme/error.hpp"

namespace hypme {

namespace {

std::string compact(const Rational& r) {
  if (denominator(r) == 1) return to_string(numerator(r));
  return to_string(r);
}

RationalInterval divide(const RationalInterval& x, const Rational& d) { return {x.lo / d, x.hi / d}; }

// Exact b-th root of v >= 0, if v is a perfect power.
std::optional<BigInt> integer_root(const BigInt& v, unsigned b) {
  if (v < 2) return v;
  BigInt lo = 1, hi = BigInt(1) << (msb(v) / b + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (pow(mid, b) <= v)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (pow(lo, b) == v) return lo;
  return std::nullopt;
}

// s^e when it is rational; small exponents only.
std::optional<Rational> exact_power(const Rational& s, const Rational& e) {
  if (e < 0 || numerator(e) > 10000 || denominator(e) > 64) return std::nullopt;
  auto a = numerator(e).convert_to<unsigned>();
  auto b = denominator(e).convert_to<unsigned>();
  auto num = integer_root(numerator(s), b);
  auto den = integer_root(denominator(s), b);
  if (!num || !den) return std::nullopt;
  return pow(Rational(*num, *den), a);
}

}  // namespace

IntegrabilityFunction IntegrabilityFunction::power(const Rational& p) {
  if (p <= 0) throw PreconditionError("power(p) needs p > 0");
  return {FunctionFamily::power, p};
}

IntegrabilityFunction IntegrabilityFunction::exp_power(const Rational& p) {
  if (p <= 0) throw PreconditionError("exp_power(p) needs p > 0");
  return {FunctionFamily::exp_power, p};
}

IntegrabilityFunction IntegrabilityFunction::poly_plus(const Rational& q) {
  if (q <= 0) throw PreconditionError("poly_plus(q) needs q > 0");
  return {FunctionFamily::poly_plus, q};
}

IntegrabilityFunction IntegrabilityFunction::table(std::vector<std::pair<Rational, Rational>> samples) {
  if (samples.size() < 2) throw PreconditionError("a table function needs at least two samples");
  if (samples.front().first < 0 || samples.front().second < 0)
    throw PreconditionError("table samples must be non-negative");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].first <= samples[i - 1].first)
      throw PreconditionError("table arguments must be strictly increasing");
    if (samples[i].second < samples[i - 1].second)
      throw PreconditionError("table values must be non-decreasing");
  }
  if (samples.back().second == samples[samples.size() - 2].second)
    throw PreconditionError("table must end with a positive slope (the function is unbounded)");
  IntegrabilityFunction f(FunctionFamily::table, 0);
  f.samples_ = std::move(samples);
  return f;
}

IntegrabilityFunction IntegrabilityFunction::parse(std::string_view spec) {
  std::string text(spec);
  Rational scale = 1;
  if (auto at = text.find('@'); at != std::string::npos) {
    scale = parse_rational(text.substr(at + 1));
    text.resize(at);
  }
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("function spec '" + std::string(spec) + "' must look like family:parameter");
  std::string family = text.substr(0, colon);
  std::string param = text.substr(colon + 1);
  auto build = [&]() -> IntegrabilityFunction {
    if (family == "power") return power(parse_rational(param));
    if (family == "exp_power" || family == "exp-power") return exp_power(parse_rational(param));
    if (family == "poly_plus" || family == "poly-plus") return poly_plus(parse_rational(param));
    if (family == "table") {
      std::vector<std::pair<Rational, Rational>> samples;
      std::size_t pos = 0;
      while (pos <= param.size()) {
        auto comma = param.find(',', pos);
        std::string item = param.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("table sample '" + item + "' must look like t=value");
        samples.emplace_back(parse_rational(item.substr(0, eq)), parse_rational(item.substr(eq + 1)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      return table(std::move(samples));
    }
    throw ParseError("unknown function family '" + family + "'");
  };
  try {
    return build().scaled(scale);
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("function spec '") + std::string(spec) + "': " + e.what());
  }
}

IntegrabilityFunction IntegrabilityFunction::scaled(const Rational& delta) const {
  if (delta <= 0) throw PreconditionError("scale must be positive");
  IntegrabilityFunction f = *this;
  f.scale_ = scale_ * delta;
  return f;
}

std::string IntegrabilityFunction::spec() const {
  std::string s;
  switch (family_) {
    case FunctionFamily::power:
      s = "power:" + compact(parameter_);
      break;
    case FunctionFamily::exp_power:
      s = "exp_power:" + compact(parameter_);
      break;
    case FunctionFamily::poly_plus:
      s = "poly_plus:" + compact(parameter_);
      break;
    case FunctionFamily::table:
      s = "table:";
      for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (i) s += ",";
        s += compact(samples_[i].first) + "=" + compact(samples_[i].second);
      }
      break;
  }
  if (scale_ != 1) s += "@" + compact(scale_);
  return s;
}

namespace {

// Exponent e of the monomial families t^e.
Rational monomial_exponent(FunctionFamily family, const Rational& parameter) {
  return family == FunctionFamily::power ? parameter : 1 + 1 / parameter;
}

}  // namespace

Rational IntegrabilityFunction::table_value(const Rational& t) const {
  if (t <= samples_.front().first) return samples_.front().second;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const auto& [t0, v0] = samples_[i];
    const auto& [t1, v1] = samples_[i + 1];
    if (t <= t1) return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  }
  const auto& [t0, v0] = samples_[samples_.size() - 2];
  const auto& [t1, v1] = samples_.back();
  return v1 + (v1 - v0) * (t - t1) / (t1 - t0);
}

Rational IntegrabilityFunction::table_inverse(const Rational& y) const {
  if (y <= samples_.front().second) return 0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    const auto& [t0, v0] = samples_[i];
    const auto& [t1, v1] = samples_[i + 1];
    if (y <= v1) return t0 + (y - v0) * (t1 - t0) / (v1 - v0);
  }
  const auto& [t0, v0] = samples_[samples_.size() - 2];
  const auto& [t1, v1] = samples_.back();
  return t1 + (y - v1) * (t1 - t0) / (v1 - v0);
}

RationalInterval IntegrabilityFunction::eval(const Rational& t) const {
  if (t < 0) throw PreconditionError("integrability functions are defined on t >= 0");
  Rational s = scale_ * t;
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus: {
      if (s == 0) return RationalInterval::exact(0);
      Rational e = monomial_exponent(family_, parameter_);
      if (auto v = exact_power(s, e)) return RationalInterval::exact(*v);
      return enclose(std::pow(to_long_double(s), to_long_double(e)));
    }
    case FunctionFamily::exp_power:
      if (s == 0) return RationalInterval::exact(1);
      return enclose(std::exp(std::pow(to_long_double(s), to_long_double(parameter_))));
    case FunctionFamily::table:
      return RationalInterval::exact(table_value(s));
  }
  return {};
}

long double IntegrabilityFunction::eval(long double t) const {
  long double s = to_long_double(scale_) * t;
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus:
      return std::pow(s, to_long_double(monomial_exponent(family_, parameter_)));
    case FunctionFamily::exp_power:
      return std::exp(std::pow(s, to_long_double(parameter_)));
    case FunctionFamily::table:
      return to_long_double(table_value(from_long_double(s)));
  }
  return 0;
}

long double IntegrabilityFunction::log_eval_at_log(long double u) const {
  long double ls = u + std::log(to_long_double(scale_));
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus:
      return to_long_double(monomial_exponent(family_, parameter_)) * ls;
    case FunctionFamily::exp_power:
      return std::exp(to_long_double(parameter_) * ls);
    case FunctionFamily::table:
      return std::log(eval(std::exp(u)));
  }
  return 0;
}

RationalInterval IntegrabilityFunction::inverse(const Rational& y) const {
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus: {
      if (y <= 0) return RationalInterval::exact(0);
      Rational e = monomial_exponent(family_, parameter_);
      Rational k = 1 / e;
      if (auto v = exact_power(y, k)) return RationalInterval::exact(*v / scale_);
      return divide(enclose(std::pow(to_long_double(y), to_long_double(k))), scale_);
    }
    case FunctionFamily::exp_power: {
      if (y <= 1) return RationalInterval::exact(0);
      long double v = std::pow(std::log(to_long_double(y)), 1.0L / to_long_double(parameter_));
      return divide(enclose(v), scale_);
    }
    case FunctionFamily::table:
      return RationalInterval::exact(table_inverse(y) / scale_);
  }
  return {};
}

long double IntegrabilityFunction::inverse(long double y) const {
  long double scale = to_long_double(scale_);
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus:
      if (y <= 0) return 0;
      return std::pow(y, 1.0L / to_long_double(monomial_exponent(family_, parameter_))) / scale;
    case FunctionFamily::exp_power:
      if (y <= 1) return 0;
      return std::pow(std::log(y), 1.0L / to_long_double(parameter_)) / scale;
    case FunctionFamily::table:
      return to_long_double(table_inverse(from_long_double(y))) / scale;
  }
  return 0;
}

long double IntegrabilityFunction::log_inverse_at_log(long double v) const {
  long double lscale = std::log(to_long_double(scale_));
  switch (family_) {
    case FunctionFamily::power:
    case FunctionFamily::poly_plus:
      return v / to_long_double(monomial_exponent(family_, parameter_)) - lscale;
    case FunctionFamily::exp_power:
      if (v <= 0) return -std::numeric_limits<long double>::infinity();
      return std::log(v) / to_long_double(parameter_) - lscale;
    case FunctionFamily::table: {
      long double t = inverse(std::exp(v));
      return t > 0 ? std::log(t) : -std::numeric_limits<long double>::infinity();
    }
  }
  return 0;
}

}  // namespace hypme
