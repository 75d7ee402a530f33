#include "hypme/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypme/error.hpp"
#include "hypme/parallel.hpp"

namespace hypme {

namespace {

constexpr long double kLn2 = 0.693147180559945309417232121458176568L;
constexpr long double kLn10 = 2.302585092994045684017991454684364208L;

std::string compact(const Rational& r) {
  if (denominator(r) == 1) return to_string(numerator(r));
  return to_string(r);
}

// Values this close are treated as ties: neither side is asserted.
bool tie(long double a, long double b) {
  return std::fabs(a - b) <= 1e-12L * (1 + std::max(std::fabs(a), std::fabs(b)));
}

std::optional<Rational> monomial_exponent(const IntegrabilityFunction& f) {
  switch (f.family()) {
    case FunctionFamily::power:
      return f.parameter();
    case FunctionFamily::poly_plus:
      return 1 + 1 / f.parameter();
    default:
      return std::nullopt;
  }
}

std::vector<long double> log_grid(const RigidityConditions& rc) {
  if (rc.n_min < 2 || rc.n_max <= rc.n_min)
    throw PreconditionError("n range must satisfy 2 <= n_min < n_max");
  if (rc.samples_per_decade == 0) throw PreconditionError("samples_per_decade must be positive");
  long double a = log_rational(rc.n_min);
  long double b = log_rational(rc.n_max);
  auto k = static_cast<std::size_t>(
      std::max(1.0L, std::ceil((b - a) / kLn10 * static_cast<long double>(rc.samples_per_decade) - 1e-9L)));
  std::vector<long double> u(k + 1);
  for (std::size_t i = 0; i < k; ++i) u[i] = a + (b - a) * static_cast<long double>(i) / static_cast<long double>(k);
  u[k] = b;
  return u;
}

double as_double(long double v) { return static_cast<double>(v); }

}  // namespace

RationalInterval Entropy::interval() const {
  if (base) {
    if (*base == 1) return RationalInterval::exact(0);
    return {ln_lower(*base), ln_upper(*base)};
  }
  if (value) return declared ? RationalInterval::exact(*value) : RationalInterval{0, *value};
  throw PreconditionError("entropy has neither a base nor a value");
}

std::string Entropy::text() const {
  if (base) return "ln(" + compact(*base) + ")";
  if (value) return compact(*value);
  return "unknown";
}

ThresholdReport threshold_p(const Rational& delta, const Entropy& entropy) {
  if (delta < 0) throw PreconditionError("threshold_p needs delta >= 0");
  if (entropy.base && *entropy.base < 1) throw PreconditionError("threshold_p needs entropy >= 0 (base >= 1)");
  RationalInterval ent = entropy.interval();
  if (ent.lo < 0) throw PreconditionError("threshold_p needs entropy >= 0");
  ThresholdReport r;
  r.delta = delta;
  r.entropy = entropy;
  r.entropy_used = ent.hi;
  r.p_threshold = 108 * delta * ent.hi + 2;
  r.exact = delta == 0 || ent.is_exact();
  return r;
}

nlohmann::json to_json(const ThresholdReport& r) {
  return {{"delta", to_string(r.delta)},
          {"delta_source", r.delta_source},
          {"entropy",
           {{"value", r.entropy.text()},
            {"source", r.entropy.declared ? "declared" : "estimated"},
            {"upper", to_string(r.entropy_used)}}},
          {"p_threshold", to_string(r.p_threshold)},
          {"p_threshold_estimate", as_double(to_long_double(r.p_threshold))},
          {"exact", r.exact}};
}

Schedule Schedule::log(const Rational& c) {
  if (c <= 0) throw PreconditionError("log schedule needs c > 0");
  return {ScheduleFamily::log, c, std::nullopt};
}

Schedule Schedule::power(const Rational& e) {
  if (e <= 0) throw PreconditionError("power schedule needs e > 0");
  return {ScheduleFamily::power, e, std::nullopt};
}

Schedule Schedule::table(std::vector<std::pair<Rational, Rational>> samples) {
  return {ScheduleFamily::table, 0, IntegrabilityFunction::table(std::move(samples))};
}

Schedule Schedule::parse(std::string_view spec) {
  std::string text(spec);
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParseError("schedule '" + text + "' must look like log:c, power:e or table:n=r,...");
  std::string family = text.substr(0, colon);
  try {
    if (family == "log") return log(parse_rational(text.substr(colon + 1)));
    if (family == "power") return power(parse_rational(text.substr(colon + 1)));
    if (family == "table") {
      auto f = IntegrabilityFunction::parse(text);
      return {ScheduleFamily::table, 0, f};
    }
  } catch (const PreconditionError& e) {
    throw ParseError("schedule '" + text + "': " + e.what());
  }
  throw ParseError("unknown schedule family '" + family + "'");
}

std::string Schedule::spec() const {
  switch (family_) {
    case ScheduleFamily::log:
      return "log:" + compact(parameter_);
    case ScheduleFamily::power:
      return "power:" + compact(parameter_);
    case ScheduleFamily::table:
      return table_->spec();
  }
  return {};
}

long double Schedule::at_log(long double u) const {
  switch (family_) {
    case ScheduleFamily::log:
      return to_long_double(parameter_) * u;
    case ScheduleFamily::power:
      return std::exp(to_long_double(parameter_) * u);
    case ScheduleFamily::table:
      return table_->eval(std::exp(u));
  }
  return 0;
}

long double Schedule::log_at_log(long double u) const {
  switch (family_) {
    case ScheduleFamily::log:
      if (u <= 0) return -std::numeric_limits<long double>::infinity();
      return std::log(to_long_double(parameter_)) + std::log(u);
    case ScheduleFamily::power:
      return to_long_double(parameter_) * u;
    case ScheduleFamily::table:
      return std::log(at_log(u));
  }
  return 0;
}

Schedule lp_schedule(const Rational& delta) {
  if (delta <= 0) throw PreconditionError("the L^p schedule needs delta > 0");
  return Schedule::log(108 * delta);
}

Schedule exp_schedule(const Rational& p, const Rational& eta, const Rational& q) {
  if (!(p > eta && eta > q && q > 0))
    throw PreconditionError("the exp schedule needs p > eta > q > 0, got p = " + compact(p) + ", eta = " +
                            compact(eta) + ", q = " + compact(q));
  return Schedule::power(eta / (1 + eta));
}

nlohmann::json to_json(const RigidityConditions& rc) {
  return {{"delta", to_string(rc.delta)},
          {"L", to_string(rc.l)},
          {"phi", rc.phi.spec()},
          {"psi", rc.psi.spec()},
          {"r", rc.r.spec()},
          {"n_range", {to_string(rc.n_min), to_string(rc.n_max)}},
          {"samples_per_decade", rc.samples_per_decade}};
}

GrowthClass growth_class(const Group& g) {
  GrowthClass c;
  auto base = g.entropy_base();
  if (!base) return c;
  c.entropy = Entropy::log_of(*base);
  if (*base != 1) return c;
  if (g.order()) {
    c.polynomial_degree = 0;
  } else if (auto v1 = g.volume(512), v2 = g.volume(1024); v1 && v2) {
    long double d = (log_big(*v2) - log_big(*v1)) / kLn2;
    c.polynomial_degree = static_cast<unsigned>(std::lround(d));
  }
  return c;
}

GrowthTable growth_table(const MarkedGroup& g, std::uint64_t radius) {
  if (g.group().volume(0)) {
    GrowthTable t;
    t.volume.reserve(radius + 1);
    for (std::uint64_t r = 0; r <= radius; ++r) t.volume.push_back(*g.group().volume(r));
    return t;
  }
  BallOptions options;
  options.build_graph = false;
  return ball(g, radius, options).growth;
}

namespace {

// ceil that ignores relative rounding noise, so that r = 100.0000001 reads as 100.
long double noisy_ceil(long double r) { return std::ceil(r - 1e-12L * std::max(1.0L, r)); }

}  // namespace

std::uint64_t condition_5_required_radius(const RigidityConditions& rc) {
  long double r = rc.r.at_log(log_rational(rc.n_max));
  if (!std::isfinite(r) || r > 1e15L)
    throw PreconditionError("r(n_max) is too large for a growth table");
  return static_cast<std::uint64_t>(noisy_ceil(std::max(0.0L, r)));
}

namespace {

struct Analytic {
  std::optional<std::string> verdict;
  std::string reason;
};

Analytic analytic_condition_5(const RigidityConditions& rc, const GrowthClass& gc) {
  if (rc.r.family() == ScheduleFamily::table) return {std::nullopt, "r is a table"};
  if (rc.phi.family() == FunctionFamily::table) return {std::nullopt, "phi is a table"};
  std::optional<RationalInterval> ent;
  if (gc.entropy) ent = gc.entropy->interval();
  bool exponential = ent && ent->lo > 0;
  bool subexponential = ent && ent->hi == 0;
  auto m = monomial_exponent(rc.phi);
  const Rational& k = rc.r.parameter();

  if (rc.r.family() == ScheduleFamily::log) {
    if (!m) return {"tends_to_zero", "phi(n/r(n)) = exp((n/(c ln n))^p) beats Vol(c ln n) <= n^(c ln|S|)"};
    if (!ent) return {std::nullopt, "no entropy for the growth"};
    Rational lo = 2 + k * ent->lo;
    Rational hi = 2 + k * ent->hi;
    if (*m > hi) return {"tends_to_zero", "phi exponent exceeds 2 + c Ent"};
    if (*m < lo) return {"fails", "phi exponent is below 2 + c Ent"};
    if (ent->is_exact()) return {"fails", "phi exponent equals 2 + c Ent; the log factors diverge"};
    return {"inconclusive", "phi exponent is within rounding of 2 + c Ent"};
  }

  // r(n) = n^e
  if (k >= 1) return {"fails", "n/r(n) stays bounded"};
  if (!m) {
    Rational rate = rc.phi.parameter() * (1 - k);
    if (subexponential || rate > k)
      return {"tends_to_zero", "ln phi(n/r(n)) grows like n^(p(1-e)), faster than ln Vol(n^e)"};
    if (rate < k && exponential) return {"fails", "ln Vol(n^e) grows like n^e, faster than ln phi(n/r(n))"};
    return {"inconclusive", "p(1-e) = e; the constants decide"};
  }
  if (exponential) return {"fails", "Vol(n^e) grows like exp(Ent n^e)"};
  if (!subexponential || !gc.polynomial_degree) return {std::nullopt, "growth degree unknown"};
  Rational exponent = 2 + k + Rational(*gc.polynomial_degree) * k - *m * (1 - k);
  if (exponent < 0) return {"tends_to_zero", "the ratio decays like a negative power of n"};
  return {"fails", "the ratio does not decay polynomially"};
}

Analytic analytic_condition_6_7(const RigidityConditions& rc, ConditionMode mode) {
  if (rc.r.family() == ScheduleFamily::table) return {std::nullopt, "r is a table"};
  const Rational& k = rc.r.parameter();
  if (mode == ConditionMode::thm42) {
    if (rc.r.family() == ScheduleFamily::power) return {"holds", "n^e eventually dominates ln n"};
    if (k / 18 >= 6 * (rc.delta + 1)) return {"holds", "c/18 >= 6(delta+1), so it holds for every n"};
    return {"fails", "c/18 < 6(delta+1)"};
  }
  long double s = to_long_double(rc.psi.scale());
  long double log_coeff = 4 * to_long_double(rc.delta + 1) / kLn2;
  auto m = monomial_exponent(rc.psi);
  if (rc.r.family() == ScheduleFamily::log) {
    if (rc.psi.family() != FunctionFamily::exp_power)
      return {"fails", "psi^-1(3Ln) grows polynomially, faster than c ln n"};
    Rational inv = 1 / rc.psi.parameter();
    if (inv > 1) return {"fails", "psi^-1(3Ln) grows like (ln n)^(1/p) with 1/p > 1"};
    long double need = log_coeff + (inv == 1 ? 3 / s : 0);
    long double have = to_long_double(k) / 18;
    if (tie(have, need)) return {"inconclusive", "c/18 is within rounding of the ln n coefficient"};
    return have > need ? Analytic{"holds", "c/18 exceeds the ln n coefficient"}
                       : Analytic{"fails", "c/18 is below the ln n coefficient"};
  }
  // r(n) = n^e
  if (rc.psi.family() == FunctionFamily::exp_power) return {"holds", "psi^-1 grows polylogarithmically"};
  Rational inv = m ? 1 / *m : Rational(1);
  if (k > inv) return {"holds", "e exceeds the exponent of psi^-1(3Ln)"};
  if (k < inv) return {"fails", "e is below the exponent of psi^-1(3Ln)"};
  if (!m) return {"inconclusive", "e matches the final slope of the table"};
  long double have = 1.0L / 18;
  long double need = 3 * std::pow(3 * to_long_double(rc.l), to_long_double(inv)) / s;
  if (tie(have, need)) return {"inconclusive", "leading coefficients agree within rounding"};
  return have > need ? Analytic{"holds", "equal exponents; 1/18 exceeds 3(3L)^k/s"}
                     : Analytic{"fails", "equal exponents; 1/18 is below 3(3L)^k/s"};
}

void finish(ConditionReport& rep, const Analytic& a, const std::string& numeric) {
  rep.analytic = a.verdict;
  rep.analytic_reason = a.reason;
  if (a.verdict) {
    rep.verdict = *a.verdict;
    rep.verdict_source = "analytic";
    rep.numeric_agrees = *a.verdict == numeric;
  } else {
    rep.verdict = numeric;
    rep.verdict_source = "numeric";
    rep.numeric_agrees = true;
  }
}

}  // namespace

ConditionReport check_condition_5(const RigidityConditions& rc, const GrowthTable& growth,
                                  const GrowthClass& gc) {
  ConditionReport rep;
  rep.condition = "(5)";
  auto grid = log_grid(rc);
  rep.required_radius = condition_5_required_radius(rc);
  if (growth.volume.empty() || growth.max_radius() < rep.required_radius)
    throw PreconditionError("growth table covers radius " + std::to_string(growth.max_radius()) +
                            "; condition (5) up to n_max needs radius " + std::to_string(rep.required_radius));
  if (rc.r.at_log(grid.front()) <= 0) throw PreconditionError("r(n_min) must be positive");

  std::vector<long double> value(grid.size());
  rep.samples.resize(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t i) {
    long double u = grid[i];
    long double r = rc.r.at_log(u);
    long double lr = rc.r.log_at_log(u);
    auto radius = static_cast<std::size_t>(noisy_ceil(r));
    long double lv = log_big(growth.volume[radius]);
    value[i] = 2 * u + lr + lv - rc.phi.log_eval_at_log(u - lr);
    rep.samples[i] = {std::exp(u), r, value[i] / kLn10, false};
  });
  for (const auto& s : rep.samples)
    if (s.r > s.n) rep.r_exceeds_n.push_back(s.n);

  // Vol(ceil r) is a step function, so the fine grid oscillates; the tail is
  // judged at decade checkpoints counted back from n_max.
  std::size_t m = value.size();
  std::size_t step = std::min(rc.samples_per_decade, m - 1);
  std::size_t start = m - 1;
  while (start >= step && value[start] < value[start - step] && !tie(value[start], value[start - step]))
    start -= step;
  if (start < m - 1) rep.n0 = rep.samples[start].n;

  std::string numeric = "inconclusive";
  if (rep.n0) {
    numeric = "tends_to_zero";
  } else if (value[m - 1] > value[m - 1 - step] && !tie(value[m - 1], value[m - 1 - step])) {
    numeric = "fails";
  }
  finish(rep, analytic_condition_5(rc, gc), numeric);
  return rep;
}

ConditionReport check_condition_6_7(const RigidityConditions& rc, ConditionMode mode) {
  ConditionReport rep;
  rep.condition = mode == ConditionMode::thm41 ? "(6)" : "(7)";
  if (rc.delta < 0) throw PreconditionError("delta must be non-negative");
  if (rc.l < 1) throw PreconditionError("L must be at least 1");
  auto grid = log_grid(rc);
  long double d1 = to_long_double(rc.delta + 1);
  long double log_3l = log_rational(3 * rc.l);

  std::vector<long double> lhs(grid.size()), rhs(grid.size());
  rep.samples.resize(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t i) {
    long double u = grid[i];
    long double r = rc.r.at_log(u);
    lhs[i] = r / 18;
    if (mode == ConditionMode::thm41) {
      long double li = rc.psi.log_inverse_at_log(log_3l + u);
      rhs[i] = 4 * d1 * u / kLn2 + (std::isinf(li) ? 0 : 3 * std::exp(li));
    } else {
      rhs[i] = 6 * d1 * u;
    }
    bool holds = lhs[i] > rhs[i] && !tie(lhs[i], rhs[i]);
    long double log10_value = lhs[i] > 0 ? std::log10(lhs[i] / rhs[i]) : -std::numeric_limits<long double>::infinity();
    rep.samples[i] = {std::exp(u), r, log10_value, holds};
  });
  for (const auto& s : rep.samples)
    if (s.r > s.n) rep.r_exceeds_n.push_back(s.n);

  std::size_t m = grid.size();
  std::string numeric = "inconclusive";
  if (rep.samples[m - 1].holds) {
    std::size_t start = m - 1;
    while (start > 0 && rep.samples[start - 1].holds) --start;
    rep.n0 = rep.samples[start].n;
    numeric = "holds";
  } else if (lhs[m - 1] < rhs[m - 1] && !tie(lhs[m - 1], rhs[m - 1])) {
    numeric = "fails";
  }
  finish(rep, analytic_condition_6_7(rc, mode), numeric);
  return rep;
}

nlohmann::json to_json(const ConditionReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : r.samples) {
    nlohmann::json js{{"n", as_double(s.n)}, {"r", as_double(s.r)}, {"log10_value", as_double(s.log10_value)}};
    if (r.condition != "(5)") js["holds"] = s.holds;
    samples.push_back(std::move(js));
  }
  nlohmann::json exceeds = nlohmann::json::array();
  for (long double n : r.r_exceeds_n) exceeds.push_back(as_double(n));
  nlohmann::json j{{"condition", r.condition},
                   {"verdict", r.verdict},
                   {"verdict_source", r.verdict_source},
                   {"analytic", r.analytic ? nlohmann::json(*r.analytic) : nlohmann::json(nullptr)},
                   {"analytic_reason", r.analytic_reason},
                   {"N0", r.n0 ? nlohmann::json(as_double(*r.n0)) : nlohmann::json(nullptr)},
                   {"numeric_agrees", r.numeric_agrees},
                   {"r_exceeds_n", exceeds},
                   {"samples", samples}};
  if (r.condition == "(5)") j["required_radius"] = r.required_radius;
  return j;
}

}  // namespace hypme
