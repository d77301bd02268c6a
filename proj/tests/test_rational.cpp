#include <catch2/catch_amalgamated.hpp>

#include "bihull/rational.hpp"

using namespace bihull;

TEST_CASE("parse and print round-trips") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-3.25") == Rat(-13, 4));
    CHECK(parse_rational("7") == Rat(7));
    CHECK(parse_rational("0.1") == Rat(1, 10));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational(""));

    CHECK(rat_to_string(Rat(1, 4)) == "0.25");
    CHECK(rat_to_string(Rat(-3, 2)) == "-1.5");
    CHECK(rat_to_string(Rat(1, 3)) == "1/3");
    CHECK(rat_to_string(Rat(5)) == "5");
    for (long num = -20; num <= 20; ++num)
        for (long den = 1; den <= 12; ++den) {
            Rat q(num, den);
            q.canonicalize();
            CHECK(parse_rational(rat_to_string(q)) == q);
        }
}

TEST_CASE("floor and double conversion are exact") {
    CHECK(rat_floor(Rat(5, 2)) == 2);
    CHECK(rat_floor(Rat(-5, 2)) == -3);
    CHECK(rat_floor(Rat(4)) == 4);
    CHECK(rat_from_double(0.5) == Rat(1, 2));
    CHECK(rat_from_double(0.1) * 36028797018963968.0 == Rat(3602879701896397));
}

TEST_CASE("fixed-point formatting rounds half to even") {
    CHECK(rat_to_fixed(Rat(1, 3), 4) == "0.3333");
    CHECK(rat_to_fixed(Rat(1, 8), 2) == "0.12");   // 0.125 -> even
    CHECK(rat_to_fixed(Rat(3, 8), 2) == "0.38");   // 0.375 -> even
    CHECK(rat_to_fixed(Rat(-1, 2), 0) == "0");     // -0.5 -> 0 (even)
    CHECK(rat_to_fixed(Rat(231, 100), 2) == "2.31");
}
