#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "elicit/error.hpp"
#include "elicit/scoring.hpp"

using namespace elicit;

namespace {

const double e = std::exp(1.0);

ScoreSpec S(std::string_view text) { return parse_score_spec(text); }

std::vector<std::pair<double, double>> positive_pairs(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(u(rng), u(rng));
    }
    return out;
}

}  // namespace

TEST(EvaluateScore, Examples) {
    EXPECT_DOUBLE_EQ(evaluate_score(S("se"), 3, 1), 4.0);
    EXPECT_DOUBLE_EQ(evaluate_score(S("apl:tau=0.9"), 1, 2), 0.9);
    EXPECT_NEAR(evaluate_score(S("gpl:tau=0.5:g=log"), e * e, 1), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(evaluate_score(S("expectile:tau=0.75:phi=square"), 2, 0), 1.0);
    EXPECT_NEAR(evaluate_score(S("se@both:log"), e, 1), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(evaluate_score(S("mv"), MeanVarPrediction{0, 1}, 0), -2.0);
    EXPECT_DOUBLE_EQ(evaluate_score(S("se@realization:log"), 0, 1), 0.0);
}

TEST(EvaluateScore, PredictionTransform) {
    // S(g^{-1}(z), y) with g = log: z = 0 predicts 1
    EXPECT_NEAR(evaluate_score(S("se@prediction:log"), 0, 3), 4.0, 1e-15);
}

TEST(EvaluateScore, Errors) {
    EXPECT_THROW(evaluate_score(S("se@both:log"), -1, 1), DomainError);
    EXPECT_THROW(evaluate_score(S("mv"), MeanVarPrediction{0, 0}, 1), DomainError);
    EXPECT_THROW(S("apl:tau=1"), ParameterError);
    EXPECT_THROW(S("mv@both:log"), ParameterError);
    EXPECT_THROW(S("se@both:square"), ParameterError);
    EXPECT_THROW(S("gpl:tau=0.5:g=negate"), ParameterError);
    EXPECT_THROW(S("huber"), ParseError);
}

TEST(ScoreSpec, EncodingRoundTrips) {
    for (const char* t : {"se", "ae", "se@both:log", "gpl:tau=0.9:g=log", "apl:tau=0.25@both:negate",
                          "expectile:tau=0.75:phi=square@both:power(0.5)", "bregman:phi=exp", "mv",
                          "mv@realization:log", "se@prediction:exp"}) {
        EXPECT_EQ(S(t).to_string(), t);
    }
}

TEST(ScoreSpec, SevenFamilies) { EXPECT_EQ(score_families().size(), 7u); }

TEST(AverageScore, Examples) {
    const double z1[] = {1, 2}, y1[] = {1, 4};
    EXPECT_DOUBLE_EQ(average_score(S("se"), z1, y1), 2.0);
    const double z2[] = {0.3, -2, 8}, y2[] = {0.3, -2, 8};
    EXPECT_DOUBLE_EQ(average_score(S("ae"), z2, y2), 0.0);
    const double z3[] = {0, 0}, y3[] = {-1, 1};
    EXPECT_DOUBLE_EQ(average_score(S("apl:tau=0.5"), z3, y3), 0.5);
}

TEST(AverageScore, Errors) {
    const double z[] = {1, 2}, y[] = {1};
    EXPECT_THROW(average_score(S("se"), z, y), PreconditionError);
    const double zl[] = {1, -2}, yl[] = {1, 1};
    try {
        average_score(S("se@both:log"), zl, yl);
        FAIL();
    } catch (const DomainError& err) {
        EXPECT_NE(std::string(err.what()).find("1"), std::string::npos);
    }
}

TEST(Homogeneity, Examples) {
    const double orders[] = {0, 1, 2, 3};
    const double cs[] = {0.5, 2, 3.7};
    const auto sample = positive_pairs(20, 3);
    EXPECT_EQ(homogeneity_probe(S("se"), orders, cs, sample).order, 2.0);
    EXPECT_EQ(homogeneity_probe(S("apl:tau=0.3"), orders, cs, sample).order, 1.0);
    EXPECT_EQ(homogeneity_probe(S("gpl:tau=0.3:g=log"), orders, cs, sample).order, 0.0);
    EXPECT_FALSE(homogeneity_probe(S("bregman:phi=exp"), orders, cs, sample).order);
}

TEST(Invariants, NonnegativeAndZeroOnDiagonal) {
    for (const char* t : {"se", "ae", "apl:tau=0.2", "gpl:tau=0.7:g=log", "expectile:tau=0.3:phi=exp",
                          "bregman:phi=square", "se@both:log", "apl:tau=0.4@both:power(-1)"}) {
        const auto s = S(t);
        for (const auto& [z, y] : positive_pairs(200, 7)) {
            EXPECT_GE(evaluate_score(s, z, y), 0.0) << t;
        }
        for (double y : {0.2, 1.0, 4.0}) {
            EXPECT_EQ(evaluate_score(s, y, y), 0.0) << t;
        }
    }
}

TEST(Invariants, SpecialCases) {
    const auto ae = S("ae"), q = S("gpl:tau=0.5:g=affine-power(1,2,0)");
    const auto se = S("se"), ex = S("expectile:tau=0.5:phi=square"), br = S("bregman:phi=square");
    for (const auto& [z, y] : positive_pairs(200, 8)) {
        EXPECT_NEAR(evaluate_score(ae, z, y), evaluate_score(q, z, y), 1e-12);
        EXPECT_NEAR(evaluate_score(se, z, y), 2 * evaluate_score(ex, z, y), 1e-12);
        EXPECT_NEAR(evaluate_score(br, z, y), 0.5 * evaluate_score(se, z, y), 1e-12);
    }
}

TEST(Invariants, JointTransformOfPinballIsGpl) {
    const auto joint = S("apl:tau=0.8@both:log"), gpl = S("gpl:tau=0.8:g=log");
    for (const auto& [z, y] : positive_pairs(200, 9)) {
        EXPECT_NEAR(evaluate_score(joint, z, y), evaluate_score(gpl, z, y), 1e-12);
    }
}

TEST(Invariants, DecreasingTransformFlipsLevel) {
    const double tau = 0.8;
    const auto g = catalog("power", std::vector<double>{-1});
    const auto joint = S("apl:tau=0.8@both:power(-1)");
    for (const auto& [z, y] : positive_pairs(200, 10)) {
        if (z == y) {
            continue;
        }
        const double flipped = ((z >= y ? 1.0 : 0.0) - (1 - tau)) * (-g.apply(z) + g.apply(y));
        EXPECT_NEAR(evaluate_score(joint, z, y), flipped, 1e-12);
    }
}

TEST(Derivative, MatchesFiniteDifferenceOffKinks) {
    for (const char* t : {"se", "apl:tau=0.2", "gpl:tau=0.7:g=log", "expectile:tau=0.3:phi=exp",
                          "bregman:phi=square", "se@both:log", "se@prediction:exp"}) {
        const auto s = S(t);
        for (const auto& [z, y] : positive_pairs(50, 12)) {
            if (std::abs(z - y) < 1e-3) {
                continue;
            }
            const double h = 1e-6;
            const double fd = (evaluate_score(s, z + h, y) - evaluate_score(s, z - h, y)) / (2 * h);
            EXPECT_NEAR(score_derivative(s, z, y), fd, 1e-5 * std::max(1.0, std::abs(fd))) << t;
        }
    }
}

TEST(PreparedScore, AgreesWithPointwise) {
    const std::vector<double> y = {0.5, 1.2, 3.0, 0.9};
    for (const char* t : {"se", "ae", "gpl:tau=0.7:g=log", "expectile:tau=0.3:phi=exp", "se@both:log",
                          "se@realization:log", "apl:tau=0.6@both:negate"}) {
        const auto s = S(t);
        const PreparedScore p(s, y);
        for (double z : {0.4, 1.0, 2.2}) {
            double expect = 0.0;
            for (double yi : y) {
                expect += evaluate_score(s, z, yi);
            }
            EXPECT_NEAR(p.mean(z), expect / 4, 1e-12) << t;
        }
    }
    const PreparedScore mv(S("mv"), y);
    EXPECT_NEAR(mv.mean(MeanVarPrediction{1, 2}),
                (evaluate_score(S("mv"), MeanVarPrediction{1, 2}, 0.5) + evaluate_score(S("mv"), MeanVarPrediction{1, 2}, 1.2) +
                 evaluate_score(S("mv"), MeanVarPrediction{1, 2}, 3.0) + evaluate_score(S("mv"), MeanVarPrediction{1, 2}, 0.9)) /
                    4,
                1e-12);
}

TEST(Generators, ConvexityGap) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (const auto& phi : {square_generator(), exp_generator()}) {
        for (int k = 0; k < 500; ++k) {
            const double z = u(rng), y = u(rng);
            EXPECT_GE(phi.value(y) - phi.value(z) - phi.slope(z) * (y - z), -1e-12) << phi.name;
            ASSERT_TRUE(phi.curvature);
            EXPECT_GE((*phi.curvature)(z), 0.0);
        }
    }
    EXPECT_THROW(generator_by_name("cosh"), ParseError);
}
