#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "elicit/error.hpp"
#include "elicit/numerics.hpp"
#include "elicit/transforms.hpp"

using namespace elicit;

namespace {

const double e = std::exp(1.0);

Bijection cat(std::string_view name, std::vector<double> p = {}) { return catalog(name, p); }

/// One parameterisation per catalog row, both orientations where a row has them.
std::vector<Bijection> instances() {
    return {cat("identity"),
            cat("negate"),
            cat("log"),
            cat("affine-log", {2, 1}),
            cat("shifted-log", {5}),
            cat("exp"),
            cat("affine-exp", {2, 1}),
            cat("affine-exp", {-0.5, 0.3}),
            cat("power", {0.5}),
            cat("power", {2}),
            cat("power", {-1}),
            cat("affine-power", {2, 3, 1}),
            cat("affine-power", {-0.5, 2, 4}),
            cat("shifted-power", {3, 1}),
            cat("box-cox", {0.25}),
            cat("box-cox", {-0.5}),
            cat("box-cox", {0})};
}

/// Evenly spread interior points of the domain, clipped to a finite window.
std::vector<double> interior(const Interval& d, std::size_t k) {
    const double lo = std::isfinite(d.lo) ? d.lo : -5.0;
    const double hi = std::isfinite(d.hi) ? d.hi : lo + 10.0;
    const double top = std::min(hi, lo + 10.0);
    std::vector<double> out;
    for (std::size_t i = 1; i <= k; ++i) {
        out.push_back(lo + (top - lo) * static_cast<double>(i) / static_cast<double>(k + 1));
    }
    return out;
}

}  // namespace

TEST(Catalog, Examples) {
    EXPECT_NEAR(cat("box-cox", {0}).apply(e), 1.0, 1e-15);
    EXPECT_NEAR(cat("power", {2}).invert(9), 3.0, 1e-15);
    const auto sl = cat("shifted-log", {5});
    EXPECT_EQ(sl.apply(-4), 0.0);
    EXPECT_FALSE(sl.domain().contains(-5));
    EXPECT_TRUE(sl.domain().contains(-4.999));
}

TEST(Catalog, PointwiseExamples) {
    const auto lg = cat("log");
    EXPECT_EQ(lg.apply(1), 0.0);
    EXPECT_EQ(lg.invert(0), 1.0);
    EXPECT_EQ(lg.deriv(2), 0.5);
    const auto neg = cat("negate");
    EXPECT_EQ(neg.apply(3), -3.0);
    EXPECT_EQ(neg.monotonicity(), Monotonicity::decreasing);
    EXPECT_NEAR(cat("affine-exp", {2, 1}).invert(e), 0.0, 1e-15);
}

TEST(Catalog, Errors) {
    EXPECT_THROW(cat("sinh"), ParameterError);
    EXPECT_THROW(cat("affine-log", {-1, 0}), ParameterError);
    EXPECT_THROW(cat("affine-exp", {0, 1}), ParameterError);
    EXPECT_THROW(cat("power", {0}), ParameterError);
    EXPECT_THROW(cat("log", {1}), ParameterError);
    try {
        cat("log").apply(0.0);
        FAIL() << "log(0) should be a domain error";
    } catch (const DomainError& err) {
        EXPECT_NE(std::string(err.what()).find("(0, inf)"), std::string::npos) << err.what();
    }
    EXPECT_THROW(cat("exp").invert(-1), DomainError);
    EXPECT_THROW(cat("square").invert(4), PreconditionError);
}

TEST(Catalog, ParseAndPrintRoundTrip) {
    for (const auto& g : instances()) {
        const auto again = parse_bijection(g.to_string());
        EXPECT_EQ(again.to_string(), g.to_string());
        EXPECT_EQ(again.params(), g.params());
    }
    EXPECT_EQ(parse_bijection("power(0.5)").to_string(), "power(0.5)");
}

TEST(Catalog, PowerMonotonicityDependsOnExponent) {
    EXPECT_EQ(cat("power", {2}).monotonicity(), Monotonicity::increasing);
    EXPECT_EQ(cat("power", {-1}).monotonicity(), Monotonicity::decreasing);
    EXPECT_EQ(cat("box-cox", {-0.5}).monotonicity(), Monotonicity::increasing);
    EXPECT_EQ(cat("affine-exp", {-1, 0}).monotonicity(), Monotonicity::decreasing);
    // positive powers include the origin, negative ones exclude it
    EXPECT_TRUE(cat("power", {2}).domain().contains(0));
    EXPECT_FALSE(cat("power", {-1}).domain().contains(0));
}

TEST(Catalog, ListingHasEveryRow) {
    const auto& rows = catalog_rows();
    EXPECT_GE(rows.size(), 12u);
    const auto bc = std::find_if(rows.begin(), rows.end(), [](const auto& r) { return r.name == "box-cox"; });
    ASSERT_NE(bc, rows.end());
    EXPECT_NE(bc->functional.find("exp"), std::string::npos);
}

TEST(Roundtrip, Examples) {
    const double g1[] = {0.1, 1, 10};
    EXPECT_LE(roundtrip_check(cat("log"), g1), 1e-12);
    const double g2[] = {0.5, 1, 2};
    EXPECT_LE(roundtrip_check(cat("box-cox", {0.25}), g2), 1e-12);
    const double g3[] = {0.5, 2};
    EXPECT_LE(roundtrip_check(cat("power", {-1}), g3), 1e-12);
}

TEST(Roundtrip, EveryRowOnHundredPoints) {
    for (const auto& g : instances()) {
        const auto grid = interior(g.domain(), 100);
        EXPECT_LE(roundtrip_check(g, grid), 1e-10) << g.to_string();
    }
}

TEST(Derivative, MatchesCentralDifference) {
    for (const auto& g : instances()) {
        for (double t : interior(g.domain(), 9)) {
            const double fd = central_diff([&](double s) { return g.apply(s); }, t, 1e-6 * std::max(1.0, std::abs(t)));
            const double an = g.deriv(t);
            EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(an))) << g.to_string() << " at " << t;
        }
    }
}

TEST(Monotonicity, OrderPreservedOrReversed) {
    std::mt19937_64 rng(5);
    for (const auto& g : instances()) {
        const auto pts = interior(g.domain(), 50);
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        for (int k = 0; k < 200; ++k) {
            const double a = pts[pick(rng)];
            const double b = pts[pick(rng)];
            if (a == b) {
                continue;
            }
            const double s = (g.apply(b) - g.apply(a)) * (b - a);
            if (g.monotonicity() == Monotonicity::increasing) {
                EXPECT_GT(s, 0) << g.to_string();
            } else {
                EXPECT_LT(s, 0) << g.to_string();
            }
        }
    }
}

TEST(TransformMode, Mapping) {
    const auto lg = cat("log");
    const auto both = TransformMode::both(lg);
    EXPECT_NEAR(both.map_prediction(e), 1.0, 1e-15);
    EXPECT_NEAR(both.map_realization(e), 1.0, 1e-15);
    EXPECT_EQ(both.suffix(), "@both:log");
    const auto pred = TransformMode::prediction(lg);
    EXPECT_NEAR(pred.map_prediction(0.0), 1.0, 1e-15);
    EXPECT_NEAR(pred.map_realization(2.0), 2.0, 0);
    EXPECT_EQ(TransformMode::both(cat("negate")).prediction_orientation(), -1);
    EXPECT_EQ(TransformMode::none().prediction_orientation(), 1);
    EXPECT_THROW(TransformMode::both(cat("square")), ParameterError);
    EXPECT_NO_THROW(TransformMode::realization(cat("square")));
}

TEST(TransformMode, Parse) {
    const auto m = parse_transform_mode("realization:power(2)");
    EXPECT_EQ(m.kind(), TransformKind::realization);
    EXPECT_EQ(m.g().to_string(), "power(2)");
    EXPECT_THROW(parse_transform_mode("sideways:log"), ParseError);
}
