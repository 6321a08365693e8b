#include <doctest.h>

#include <lensspec/serialize.hpp>

using namespace lensspec;

TEST_SUITE("serialize")
{
    TEST_CASE("lens literals")
    {
        const auto L = parse_lens("L(11;1,2,3)");
        CHECK(L.q == 11);
        CHECK(L.s == std::vector<std::int64_t>{1, 2, 3});
        CHECK(parse_lens(" L( 11 ; -1 , 13 ) ").s == std::vector<std::int64_t>{10, 2});
        CHECK(format_lens(L) == "L(11;1,2,3)");
        CHECK(parse_lens(format_lens(parse_lens("L(23;1,2,3,4,11)"))) == parse_lens("L(23;1,2,3,4,11)"));
        for (const char *bad : {"L(11;1,2,", "L11;1,2)", "L(x;1,2)", "L(11;1;2)", "L(11;)", "L(0;1,2)", "", "L(11;1,2)x"}) {
            CHECK_THROWS_AS(parse_lens(bad), PreconditionError);
        }
        CHECK_THROWS_AS(parse_lens("L(11;1,2,"), ParseError);
    }

    TEST_CASE("keys print in table notation")
    {
        CHECK(format_key(lens::IsometryClassKey{11, {1, 2, 3}}) == "[1, 2, 3]");
    }

    TEST_CASE("big integers switch to strings")
    {
        CHECK(to_json(BigInt(42)) == nlohmann::json(42));
        CHECK(to_json(BigInt(-7)) == nlohmann::json(-7));
        const BigInt huge("123456789012345678901234567890");
        CHECK(to_json(huge) == nlohmann::json("123456789012345678901234567890"));
    }

    TEST_CASE("spectrum slice json")
    {
        const auto j = to_json(lens::spectrum_slice(lens::make_lens(2, {1, 1}), 3));
        CHECK(j["q"] == 2);
        CHECK(j["K"] == 3);
        CHECK(j["mults"] == nlohmann::json::array({1, 0, 9, 0}));
    }

    TEST_CASE("rationals")
    {
        CHECK(parse_rational("3/10") == mpq_class(3, 10));
        CHECK(parse_rational("0.3") == mpq_class(3, 10));
        CHECK(parse_rational("2") == mpq_class(2));
        CHECK(parse_rational("-1.25") == mpq_class(-5, 4));
        CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
        CHECK_THROWS_AS(parse_rational("abc"), ParseError);
        CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
    }

    TEST_CASE("decimal rounding")
    {
        CHECK(format_decimal(mpq_class(950, 990), 5) == "0.95960");
        CHECK(format_decimal(mpq_class(6616, 6680), 5) == "0.99042");
        CHECK(format_decimal(mpq_class(1), 4) == "1.0000");
        CHECK(format_decimal(mpq_class(1, 8), 2) == "0.13");
        CHECK(format_decimal(mpq_class(-1, 8), 2) == "-0.13");
    }
}
