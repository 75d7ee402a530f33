#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hypme/group.hpp"
#include "hypme/integrability.hpp"
#include "hypme/numeric.hpp"

namespace hypme {

/// Entropy of a generating set: ln(base) for an exact rational base, an exact
/// rational value, or an estimated upper bound.
struct Entropy {
  std::optional<Rational> base;
  std::optional<Rational> value;
  bool declared = true;

  static Entropy log_of(const Rational& base) { return {base, std::nullopt, true}; }
  static Entropy exact(const Rational& value) { return {std::nullopt, value, true}; }
  static Entropy estimated(const Rational& upper) { return {std::nullopt, upper, false}; }

  RationalInterval interval() const;
  std::string text() const;
};

struct ThresholdReport {
  Rational delta;
  Entropy entropy;
  /// Upper rounding of Ent used in the formula.
  Rational entropy_used;
  /// 108 δ Ent + 2, exact when δ = 0 or Ent = 0.
  Rational p_threshold;
  bool exact = true;
  std::string delta_source = "given";
};

ThresholdReport threshold_p(const Rational& delta, const Entropy& entropy);
nlohmann::json to_json(const ThresholdReport& r);

enum class ScheduleFamily { log, power, table };

/// The schedule r(n): c ln n, n^e or a piecewise-linear table in n.
class Schedule {
 public:
  static Schedule log(const Rational& c);
  static Schedule power(const Rational& e);
  static Schedule table(std::vector<std::pair<Rational, Rational>> samples);
  /// "log:108", "power:2/3", "table:1=0,10=4,100=9".
  static Schedule parse(std::string_view spec);

  ScheduleFamily family() const { return family_; }
  const Rational& parameter() const { return parameter_; }
  std::string spec() const;

  /// r(e^u), and ln r(e^u).
  long double at_log(long double u) const;
  long double log_at_log(long double u) const;

 private:
  Schedule(ScheduleFamily family, Rational parameter, std::optional<IntegrabilityFunction> table)
      : family_(family), parameter_(std::move(parameter)), table_(std::move(table)) {}

  ScheduleFamily family_;
  Rational parameter_;
  std::optional<IntegrabilityFunction> table_;
};

/// r(n) = 108 δ ln n, for δ > 0.
Schedule lp_schedule(const Rational& delta);
/// r(n) = n^(η/(1+η)), for p > η > q > 0.
Schedule exp_schedule(const Rational& p, const Rational& eta, const Rational& q);

struct RigidityConditions {
  Rational delta;
  Rational l = 1;
  IntegrabilityFunction phi = IntegrabilityFunction::power(2);
  IntegrabilityFunction psi = IntegrabilityFunction::power(2);
  Schedule r = Schedule::log(1);
  Rational n_min = 10;
  Rational n_max = 1000000;
  /// Grid density of the log-spaced evaluation.
  std::size_t samples_per_decade = 20;
};

nlohmann::json to_json(const RigidityConditions& rc);

/// What is known about the growth of Vol_S beyond the table: exponential
/// with entropy ln(base), or polynomial of a given degree.
struct GrowthClass {
  std::optional<Entropy> entropy;
  std::optional<unsigned> polynomial_degree;
};

/// Read off from a group with closed-form volume.
GrowthClass growth_class(const Group& g);

/// Ball volumes of g through the given radius, from the closed form when the
/// family has one, otherwise by BFS.
GrowthTable growth_table(const MarkedGroup& g, std::uint64_t radius);

struct ConditionSample {
  long double n = 0;
  long double r = 0;
  /// log10 of the ratio (condition 5) or of lhs / rhs (conditions 6, 7).
  long double log10_value = 0;
  bool holds = false;  // conditions 6, 7 only
};

struct ConditionReport {
  std::string condition;
  /// tends_to_zero | fails | inconclusive for (5); holds | fails | inconclusive for (6), (7).
  std::string verdict;
  /// analytic | numeric
  std::string verdict_source;
  std::optional<std::string> analytic;
  std::string analytic_reason;
  /// Start of the decreasing tail, judged at decade checkpoints (5), or of the
  /// holding tail (6, 7).
  std::optional<long double> n0;
  /// Whether the numeric evaluation agrees with the analytic verdict.
  bool numeric_agrees = true;
  std::uint64_t required_radius = 0;
  std::vector<long double> r_exceeds_n;
  std::vector<ConditionSample> samples;
};

nlohmann::json to_json(const ConditionReport& r);

/// Radius the growth table must reach for condition (5): ceil r(n_max).
std::uint64_t condition_5_required_radius(const RigidityConditions& rc);

/// n^2 r(n) Vol(r(n)) / φ(n / r(n)) on the log-spaced grid of [n_min, n_max].
ConditionReport check_condition_5(const RigidityConditions& rc, const GrowthTable& growth,
                                  const GrowthClass& growth_class = {});

enum class ConditionMode { thm41, thm42 };

/// thm41: r(n)/18 >= 4(δ+1) log2 n + 3 ψ^-1(3Ln).
/// thm42: r(n)/18 >= 6(δ+1) ln n.
ConditionReport check_condition_6_7(const RigidityConditions& rc, ConditionMode mode);

}  // namespace hypme
