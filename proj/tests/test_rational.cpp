#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "vagap/rational.hpp"

using vagap::Rational;

TEST_SUITE("rational") {

TEST_CASE("decimal weights are exact") {
  const Rational a = Rational::from_double(0.1);
  const Rational b = Rational::from_double(0.2);
  CHECK(a + b == Rational::from_double(0.3));
  CHECK((a + b).to_string() == "3/10");
  CHECK((a + b).to_double() == doctest::Approx(0.3));
}

TEST_CASE("sign and ordering") {
  CHECK(Rational::from_double(-1.5).sign() < 0);
  CHECK(Rational().sign() == 0);
  CHECK(Rational::from_double(2) > Rational::from_double(1.75));
  CHECK(-Rational::from_double(2) == Rational::from_double(-2));
  CHECK(Rational::from_double(2) - Rational::from_double(1) == Rational::from_double(1));
}

TEST_CASE("fractions print in lowest terms") {
  CHECK(Rational::from_double(3).to_string() == "3");
  CHECK(Rational::from_double(-0.5).to_string() == "-1/2");
  CHECK(Rational(4, 8) == Rational(1, 2));
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(Rational::from_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

}
