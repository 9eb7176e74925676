#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "badapprox/rat.hpp"

using namespace badapprox;

TEST_CASE("parse_rat accepts p/q and bare integers") {
    CHECK(parse_rat("3/4") == Rat(3, 4));
    CHECK(parse_rat("-7/2") == Rat(-7, 2));
    CHECK(parse_rat("5") == Rat(5));
    CHECK(parse_rat("6/4") == Rat(3, 2));  // canonicalized
}

TEST_CASE("parse_rat rejects malformed input") {
    CHECK_THROWS_AS(parse_rat("3/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("3/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/2/3"), std::invalid_argument);
}

TEST_CASE("rat_str round-trips exactly") {
    for (const char* s : {"3/4", "-7/2", "0/1", "123456789123456789/987654321987654321"}) {
        Rat r = parse_rat(s);
        CHECK(parse_rat(rat_str(r)) == r);
    }
    CHECK(rat_str(Rat(3)) == "3/1");
}

TEST_CASE("floor and ceil on rationals") {
    CHECK(rat_floor(Rat(7, 2)) == 3);
    CHECK(rat_floor(Rat(-7, 2)) == -4);
    CHECK(rat_floor(Rat(4)) == 4);
    CHECK(rat_ceil(Rat(7, 2)) == 4);
    CHECK(rat_ceil(Rat(-7, 2)) == -3);
    CHECK(rat_ceil(Rat(4)) == 4);
}

TEST_CASE("integer powers of rationals") {
    CHECK(rat_ipow(Rat(2, 3), 3) == Rat(8, 27));
    CHECK(rat_ipow(Rat(2, 3), -2) == Rat(9, 4));
    CHECK(rat_ipow(Rat(5), 0) == Rat(1));
    CHECK_THROWS_AS(rat_ipow(Rat(0), -1), std::domain_error);
}

TEST_CASE("integer powers of big integers") {
    CHECK(ipow(BigInt(2), 64) == BigInt(1) << 64);
    CHECK(ipow(BigInt(10), 0) == 1);
}
