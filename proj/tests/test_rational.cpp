#include <doctest.h>

#include <random>
#include <sstream>
#include <stdexcept>

#include "kmpmd/rational.hpp"

using kmpmd::Rational;

TEST_CASE("parse accepts integers, fractions and decimals") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("2/4") == Rational(1, 2));
  CHECK(Rational::parse("-6/8").str() == "-3/4");
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("1.5") == Rational(3, 2));
  CHECK(Rational::parse("-0.125") == Rational(-1, 8));
}

TEST_CASE("parse rejects malformed text and zero denominators") {
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::domain_error);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("arithmetic and rendering") {
  const Rational a(1, 3), b(1, 6);
  CHECK((a + b).str() == "1/2");
  CHECK((a - b) == b);
  CHECK((a * b) == Rational(1, 18));
  CHECK((a / b) == Rational(2));
  CHECK((a / b).is_integer());
  CHECK((-a).sign() == -1);
  CHECK(Rational(0).is_zero());
  CHECK(Rational(-5, 2).abs() == Rational(5, 2));
  CHECK(Rational(3, 4).numerator_str() == "3");
  CHECK(Rational(3, 4).denominator_str() == "4");
  CHECK_THROWS_AS(a / Rational(0), std::domain_error);
  std::ostringstream out;
  out << Rational(-7, 3);
  CHECK(out.str() == "-7/3");
  CHECK(kmpmd::min(a, b) == b);
  CHECK(kmpmd::max(a, b) == a);
}

TEST_CASE("field identities and ordering agree with cross multiplication") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    const long p1 = num(rng), q1 = den(rng), p2 = num(rng), q2 = den(rng);
    const Rational a(p1, q1), b(p2, q2);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a * b) / b == a);
    const __int128 lhs = static_cast<__int128>(p1) * q2, rhs = static_cast<__int128>(p2) * q1;
    CHECK((a < b) == (lhs < rhs));
    CHECK((a == b) == (lhs == rhs));
    CHECK(Rational::parse(a.str()) == a);
  }
}
