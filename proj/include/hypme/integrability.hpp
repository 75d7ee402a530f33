#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypme/numeric.hpp"

namespace hypme {

enum class FunctionFamily { power, exp_power, poly_plus, table };

/// A non-decreasing unbounded function [0, inf) -> [0, inf), evaluated at
/// scale delta: phi_delta(t) = phi(delta t).
///
///   power(p)      t^p
///   exp_power(p)  exp(t^p)
///   poly_plus(q)  t^(1 + 1/q)
///   table         piecewise linear through samples, constant before the
///                 first sample and extended with the last slope
class IntegrabilityFunction {
 public:
  static IntegrabilityFunction power(const Rational& p);
  static IntegrabilityFunction exp_power(const Rational& p);
  static IntegrabilityFunction poly_plus(const Rational& q);
  static IntegrabilityFunction table(std::vector<std::pair<Rational, Rational>> samples);
  /// "power:2", "exp_power:1@1/2", "poly_plus:1", "table:0=0,1=1,2=4".
  static IntegrabilityFunction parse(std::string_view spec);

  IntegrabilityFunction scaled(const Rational& delta) const;

  FunctionFamily family() const { return family_; }
  const Rational& parameter() const { return parameter_; }
  const Rational& scale() const { return scale_; }
  const std::vector<std::pair<Rational, Rational>>& samples() const { return samples_; }
  std::string spec() const;

  /// phi_delta(t), exact whenever the value is rational and reachable
  /// (integer exponents, tables, t = 0), otherwise a tight enclosure.
  RationalInterval eval(const Rational& t) const;
  long double eval(long double t) const;
  /// ln phi_delta(e^u), for arguments far outside the long double range of t.
  long double log_eval_at_log(long double u) const;

  /// Generalised inverse inf{t >= 0 : phi_delta(t) >= y}.
  RationalInterval inverse(const Rational& y) const;
  long double inverse(long double y) const;
  /// ln of the generalised inverse at y = e^v (-inf when the inverse is 0).
  long double log_inverse_at_log(long double v) const;

 private:
  IntegrabilityFunction(FunctionFamily family, Rational parameter)
      : family_(family), parameter_(std::move(parameter)) {}

  Rational table_value(const Rational& t) const;
  Rational table_inverse(const Rational& y) const;

  FunctionFamily family_;
  Rational parameter_;
  Rational scale_ = 1;
  std::vector<std::pair<Rational, Rational>> samples_;
};

}  // namespace hypme
