#include <cmath>

#include "doctest.h"
#include "hypme/error.hpp"
#include "hypme/integrability.hpp"

using namespace hypme;

namespace {

bool contains(const RationalInterval& i, long double v) {
  return to_long_double(i.lo) <= v * (1 + 1e-12L) && to_long_double(i.hi) >= v * (1 - 1e-12L);
}

}  // namespace

TEST_CASE("parsing and canonical specs") {
  CHECK(IntegrabilityFunction::parse("power:2").spec() == "power:2");
  CHECK(IntegrabilityFunction::parse("exp-power:1/2@3").spec() == "exp_power:1/2@3");
  CHECK(IntegrabilityFunction::parse("poly_plus:1").spec() == "poly_plus:1");
  CHECK(IntegrabilityFunction::parse("table:0=0,1=1,2=4").spec() == "table:0=0,1=1,2=4");
  for (const char* bad : {"power", "power:0", "cube:2", "table:0=0", "table:0=0,0=1", "table:0=1,1=0",
                          "table:0=0,1=1,2=1", "power:2@0", "table:1"})
    CHECK_THROWS_AS(IntegrabilityFunction::parse(bad), ParseError);
}

TEST_CASE("exact evaluation where the value is rational") {
  auto p2 = IntegrabilityFunction::power(2);
  CHECK(p2.eval(Rational(3, 2)).is_exact());
  CHECK(p2.eval(Rational(3, 2)).lo == Rational(9, 4));
  auto q1 = IntegrabilityFunction::poly_plus(1);  // t^2
  CHECK(q1.eval(Rational(5)).lo == 25);
  auto scaled = p2.scaled(Rational(1, 2));
  CHECK(scaled.eval(Rational(4)).lo == 4);
  auto t = IntegrabilityFunction::parse("table:1=2,3=6");
  CHECK(t.eval(Rational(0)).lo == 2);      // constant before the first sample
  CHECK(t.eval(Rational(2)).lo == 4);      // interpolation
  CHECK(t.eval(Rational(5)).lo == 10);     // last slope extended
  CHECK(IntegrabilityFunction::exp_power(1).eval(Rational(0)).lo == 1);
  CHECK_THROWS_AS(p2.eval(Rational(-1)), PreconditionError);
}

TEST_CASE("enclosures for irrational values") {
  auto half = IntegrabilityFunction::power(Rational(1, 2));
  CHECK(contains(half.eval(Rational(2)), std::sqrt(2.0L)));
  auto e1 = IntegrabilityFunction::exp_power(1);
  CHECK(contains(e1.eval(Rational(1)), std::exp(1.0L)));
  CHECK(contains(e1.eval(Rational(3, 2)), std::exp(1.5L)));
}

TEST_CASE("generalised inverses") {
  for (const char* spec : {"power:2", "power:1/3", "poly_plus:2", "exp_power:2", "table:0=0,1=1,2=4", "power:3@2"}) {
    auto f = IntegrabilityFunction::parse(spec);
    for (long double y : {1.5L, 2.0L, 7.0L, 100.0L}) {
      long double t = f.inverse(y);
      CHECK_MESSAGE(f.eval(t) == doctest::Approx(double(y)).epsilon(1e-9), spec << " at " << double(y));
      auto exact = f.inverse(from_long_double(y));
      CHECK(to_long_double(exact.lo) <= t * (1 + 1e-12L));
      CHECK(to_long_double(exact.hi) >= t * (1 - 1e-12L));
      CHECK(f.log_inverse_at_log(std::log(y)) == doctest::Approx(double(std::log(t))).epsilon(1e-9));
    }
  }
  auto p2 = IntegrabilityFunction::power(2);
  CHECK(p2.inverse(Rational(0)).lo == 0);
  CHECK(IntegrabilityFunction::poly_plus(1).inverse(Rational(9)).lo == 3);
  CHECK(IntegrabilityFunction::power(Rational(1, 2)).inverse(Rational(3)).lo == 9);
}

TEST_CASE("log-domain evaluation") {
  auto p = IntegrabilityFunction::power(Rational(7, 2));
  CHECK(p.log_eval_at_log(1000) == doctest::Approx(3500));
  auto e = IntegrabilityFunction::exp_power(2);
  CHECK(e.log_eval_at_log(std::log(3.0L)) == doctest::Approx(9));
  auto t = IntegrabilityFunction::parse("table:0=0,1=1,2=4");
  CHECK(t.log_eval_at_log(std::log(3.0L)) == doctest::Approx(std::log(7.0)));
}

TEST_CASE("functions are non-decreasing") {
  for (const char* spec : {"power:2", "power:1/3", "poly_plus:1", "exp_power:1/2", "table:0=1,1=1,3=5"}) {
    auto f = IntegrabilityFunction::parse(spec);
    long double prev = f.eval(0.0L);
    for (int i = 1; i <= 200; ++i) {
      long double v = f.eval(i / 20.0L);
      CHECK(v >= prev);
      prev = v;
    }
  }
}
