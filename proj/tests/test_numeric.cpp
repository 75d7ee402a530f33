#include <cmath>

#include "doctest.h"
#include "hypme/error.hpp"
#include "hypme/numeric.hpp"

using namespace hypme;

TEST_CASE("rationals round-trip through text") {
  CHECK(to_string(Rational(3, 6)) == "1/2");
  CHECK(to_string(Rational(4)) == "4/1");
  CHECK(parse_rational("7/14") == Rational(1, 2));
  CHECK(parse_rational(" -0.25 ") == Rational(-1, 4));
  CHECK(parse_rational("12") == 12);
  CHECK(parse_rational("1e3") == 1000);
  CHECK(parse_rational("2.5e-2") == Rational(1, 40));
  for (const char* bad : {"", "1/0", "abc", "1/", ".", "1e", "--1"})
    CHECK_THROWS_AS(parse_rational(bad), ParseError);
}

TEST_CASE("floor, ceil and exact long double conversion") {
  CHECK(floor(Rational(-7, 2)) == -4);
  CHECK(ceil(Rational(-7, 2)) == -3);
  CHECK(ceil(Rational(8, 2)) == 4);
  CHECK(from_long_double(0.375L) == Rational(3, 8));
  CHECK(to_long_double(Rational(1, 3)) == doctest::Approx(1.0 / 3));
  BigInt huge = boost::multiprecision::pow(BigInt(3), 5000);
  CHECK(log_big(huge) == doctest::Approx(5000 * std::log(3.0)));
}

TEST_CASE("log2 and ln roundings bracket the true value") {
  CHECK(log2_upper(Rational(64)) == 6);
  CHECK(exact_log2(Rational(1, 8)) == -3);
  CHECK_FALSE(exact_log2(Rational(3)).has_value());
  for (int x : {3, 5, 7, 10, 1000, 123457}) {
    long double l2 = std::log2(static_cast<long double>(x));
    CHECK(to_long_double(log2_upper(Rational(x))) >= l2);
    CHECK(to_long_double(log2_upper(Rational(x))) - l2 < 1e-9L);
    long double ln = std::log(static_cast<long double>(x));
    CHECK(to_long_double(ln_lower(Rational(x))) <= ln);
    CHECK(to_long_double(ln_upper(Rational(x))) >= ln);
    CHECK(ln_upper(Rational(x)) - ln_lower(Rational(x)) < Rational(1, 1000000));
  }
}

TEST_CASE("compare_with_scaled_log2 decides exactly") {
  // 3 vs 1 * log2(8) = 3: equal.
  CHECK(compare_with_scaled_log2(Rational(3), Rational(1), Rational(8)) == 0);
  CHECK(compare_with_scaled_log2(Rational(3), Rational(1), Rational(9)) == -1);
  CHECK(compare_with_scaled_log2(Rational(3), Rational(1), Rational(7)) == 1);
  // 2 log2 3 = log2 9 lies between 3 and 4.
  CHECK(compare_with_scaled_log2(Rational(3), Rational(2), Rational(3)) == -1);
  CHECK(compare_with_scaled_log2(Rational(4), Rational(2), Rational(3)) == 1);
  CHECK(compare_with_scaled_log2(Rational(0), Rational(0), Rational(5)) == 0);
}

TEST_CASE("enclosures contain the value") {
  auto i = enclose(std::sqrt(2.0L));
  CHECK(to_long_double(i.lo) <= std::sqrt(2.0L));
  CHECK(to_long_double(i.hi) >= std::sqrt(2.0L));
  CHECK(i.lo * i.lo < 2);
  CHECK(i.hi * i.hi > 2);
}
