#include "catch_amalgamated.hpp"
#include "zeroext/rat.hpp"

using namespace zeroext;

TEST_CASE("rationals normalize to canonical form") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, 4) == Rat(-1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(0, 7) == Rat(0));
  CHECK(Rat(6, 3).is_integer());
  CHECK(Rat(6, 3).num() == 2);
  CHECK(Rat(6, 3).den() == 1);
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) - Rat(1, 3) == Rat(1, 6));
  CHECK(Rat(2, 3) * Rat(3, 4) == Rat(1, 2));
  CHECK(Rat(1, 2) / Rat(3, 2) == Rat(1, 3));
  CHECK(-Rat(1, 2) == Rat(-1, 2));
  Rat acc(0);
  for (int i = 0; i < 10; ++i) acc += Rat(1, 10);
  CHECK(acc == Rat(1));
}

TEST_CASE("rational ordering") {
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK(Rat(-1, 2) < Rat(0));
  CHECK(Rat(7, 3) > Rat(2));
  CHECK(Rat(1, 2) <= Rat(1, 2));
  CHECK(Rat(1, 2).sign() == 1);
  CHECK(Rat(-3).sign() == -1);
  CHECK(Rat(0).sign() == 0);
}

TEST_CASE("ceil rounds toward positive infinity") {
  CHECK(Rat(7, 2).ceil() == 4);
  CHECK(Rat(3).ceil() == 3);
  CHECK(Rat(-7, 2).ceil() == -3);
  CHECK(Rat(0).ceil() == 0);
}

TEST_CASE("string round trip and parsing") {
  CHECK(Rat(3, 7).str() == "3/7");
  CHECK(Rat(5).str() == "5");
  CHECK(Rat(-1, 2).str() == "-1/2");
  CHECK(parse_rat("3/7") == Rat(3, 7));
  CHECK(parse_rat("-4") == Rat(-4));
  CHECK(parse_rat("0") == Rat(0));
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
  CHECK_THROWS_AS(parse_rat("1/2/3"), Error);
  CHECK_THROWS_AS(parse_rat(""), Error);
}

TEST_CASE("zero denominator and overflow raise") {
  CHECK_THROWS_AS(Rat(1, 0), Error);
  Rat big(INT64_MAX / 2);
  CHECK_THROWS_AS(big * Rat(4), Error);
  try {
    big* Rat(4);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == "Overflow");
  }
}
