#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

using namespace elicit;

TEST(Text, Trim) {
    EXPECT_EQ(text::trim("  a b \t"), "a b");
    EXPECT_EQ(text::trim(""), "");
}

TEST(Text, SplitTopIgnoresNestedSeparators) {
    const auto parts = text::split_top("power(1,2):g=affine-exp(2,1)", ':');
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0], "power(1,2)");
    EXPECT_EQ(parts[1], "g=affine-exp(2,1)");
}

TEST(Text, ParseDoubleIsStrict) {
    EXPECT_DOUBLE_EQ(text::parse_double(" 2.5 ", "x"), 2.5);
    EXPECT_DOUBLE_EQ(text::parse_double("-1e-3", "x"), -1e-3);
    EXPECT_THROW(text::parse_double("2.5x", "x"), ParseError);
    EXPECT_THROW(text::parse_double("", "x"), ParseError);
}

TEST(Text, ParseCount) {
    EXPECT_EQ(text::parse_count("1e6", "n"), 1'000'000u);
    EXPECT_EQ(text::parse_count("17", "n"), 17u);
    EXPECT_THROW(text::parse_count("1.5", "n"), ParseError);
    EXPECT_THROW(text::parse_count("-3", "n"), ParseError);
}

TEST(Text, ParseU64CoversFullRange) {
    EXPECT_EQ(text::parse_u64("18446744073709551615", "seed"), std::numeric_limits<std::uint64_t>::max());
    EXPECT_THROW(text::parse_u64("18446744073709551616", "seed"), ParseError);
    EXPECT_THROW(text::parse_u64("12a", "seed"), ParseError);
}

TEST(Text, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 2.0, -1e-300, 6.02214076e23, std::exp(1.0)}) {
        EXPECT_EQ(text::parse_double(text::format_double(v), "v"), v);
    }
    EXPECT_EQ(text::format_double(2.0), "2");
    EXPECT_EQ(text::format_double(0.5), "0.5");
}

TEST(Text, ParseCall) {
    const auto c = text::parse_call("affine-power(2, 1,0.5)");
    EXPECT_EQ(c.name, "affine-power");
    EXPECT_EQ(c.args, (std::vector<double>{2, 1, 0.5}));
    EXPECT_TRUE(text::parse_call("log").args.empty());
    EXPECT_THROW(text::parse_call("log(1"), ParseError);
}

TEST(Text, ParseTagged) {
    const auto t = text::parse_tagged("gpl:tau=0.9:g=log");
    EXPECT_EQ(t.head, "gpl");
    EXPECT_EQ(t.options.at("tau"), "0.9");
    EXPECT_EQ(t.options.at("g"), "log");
    EXPECT_THROW(text::parse_tagged("gpl:tau"), ParseError);
}
