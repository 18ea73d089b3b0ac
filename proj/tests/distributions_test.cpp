#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "elicit/distributions.hpp"
#include "elicit/error.hpp"
#include "elicit/monte_carlo.hpp"

using namespace elicit;

namespace {

/// Mean and standard error of a sample, computed here rather than through the library.
std::pair<double, double> mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return {m, std::sqrt(ss / (n - 1) / n)};
}

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<DistributionSpec> continuous() {
    return {DistributionSpec(dist::Normal{0.5, 2}), DistributionSpec(dist::Lognormal{0.3, 0.7}),
            DistributionSpec(dist::Exponential{1.5}), DistributionSpec(dist::Uniform{-1, 3})};
}

}  // namespace

TEST(SampleIid, Examples) {
    const auto u = sample_iid(DistributionSpec(dist::Uniform{0, 1}), 100'000, Seed{1});
    auto [mu, seu] = mean_se(u);
    EXPECT_LE(std::abs(mu - 0.5), 3 * seu);

    const auto x = sample_iid(DistributionSpec(dist::Exponential{2}), 100'000, Seed{2});
    auto [mx, sex] = mean_se(x);
    EXPECT_LE(std::abs(mx - 0.5), 3 * sex);

    auto l = sample_iid(DistributionSpec(dist::Lognormal{0, 1}), 1'000'000, Seed{3});
    for (double& y : l) {
        y = std::log(y);
    }
    auto [ml, sel] = mean_se(l);
    EXPECT_LE(std::abs(ml), 3 * sel);
}

TEST(SampleIid, LognormalIsExpOfNormal) {
    auto l = sample_iid(DistributionSpec(dist::Lognormal{0.4, 1.3}), 400'000, Seed{11});
    for (double& y : l) {
        y = std::log(y);
    }
    auto [m, se] = mean_se(l);
    EXPECT_LE(std::abs(m - 0.4), 3 * se);
    std::vector<double> sq(l.size());
    std::transform(l.begin(), l.end(), sq.begin(), [&](double t) { return (t - 0.4) * (t - 0.4); });
    auto [v, sev] = mean_se(sq);
    EXPECT_LE(std::abs(v - 1.69), 3 * sev);
}

TEST(SampleIid, Reproducible) {
    const DistributionSpec d(dist::Normal{0, 1});
    EXPECT_EQ(sample_iid(d, 50, Seed{9}), sample_iid(d, 50, Seed{9}));
    EXPECT_NE(sample_iid(d, 50, Seed{9}), sample_iid(d, 50, Seed{10}));
}

TEST(Cdf, Examples) {
    EXPECT_DOUBLE_EQ(cdf(DistributionSpec(dist::Normal{0, 1}), 0), 0.5);
    EXPECT_NEAR(cdf(DistributionSpec(dist::Exponential{1}), std::log(2.0)), 0.5, 1e-15);
    EXPECT_NEAR(cdf(DistributionSpec(dist::Empirical{{1, 2, 3}}), 2), 2.0 / 3.0, 1e-15);
}

TEST(Cdf, NormalMatchesErfcOracle) {
    const DistributionSpec d(dist::Normal{1, 2});
    for (double y : {-7.0, -2.0, 0.0, 1.3, 4.0, 9.5}) {
        EXPECT_NEAR(cdf(d, y), phi_cdf((y - 1) / 2), 1e-12);
    }
}

TEST(Cdf, InvertsQuantile) {
    for (const auto& d : continuous()) {
        for (int k = 1; k <= 9; ++k) {
            const double tau = 0.1 * k;
            EXPECT_NEAR(cdf(d, quantile(d, tau)), tau, 1e-10) << d.to_string();
        }
    }
}

TEST(Moments, MonteCarloAgrees) {
    for (const auto& d : continuous()) {
        const auto est = mc_expectation([](double y) { return y; }, d, 1'000'000, Seed{21});
        EXPECT_LE(std::abs(est.value - mean(d)), 3 * est.std_error) << d.to_string();
    }
    const DistributionSpec ln(dist::Lognormal{0.3, 0.7});
    EXPECT_NEAR(mean(ln), std::exp(0.3 + 0.49 / 2), 1e-14);
    EXPECT_NEAR(variance(ln), (std::exp(0.49) - 1) * std::exp(0.6 + 0.49), 1e-13);
}

TEST(UpperPartialMoment, MatchesQuadrature) {
    const DistributionSpec d(dist::Exponential{1});
    // E[(Y - z)+] = e^{-z} for z >= 0
    EXPECT_NEAR(upper_partial_moment(d, 0.7), std::exp(-0.7), 1e-14);
    const DistributionSpec u(dist::Uniform{0, 1});
    EXPECT_NEAR(upper_partial_moment(u, 0.25), 0.75 * 0.75 / 2, 1e-14);
}

TEST(AnalyticFunctional, Examples) {
    const auto v1 = analytic_functional(DistributionSpec(dist::Lognormal{0, 1}),
                                        FunctionalSpec(functional::GTransformedExpectation{catalog("power", std::vector<double>{2})}));
    ASSERT_TRUE(v1);
    EXPECT_NEAR(scalar_of(*v1), std::exp(1.0), 1e-12);

    const auto v2 = analytic_functional(DistributionSpec(dist::Normal{0, 1}),
                                        FunctionalSpec(functional::GTransformedExpectation{catalog("exp")}));
    ASSERT_TRUE(v2);
    EXPECT_NEAR(scalar_of(*v2), 0.5, 1e-12);

    const auto v3 = analytic_functional(DistributionSpec(dist::Exponential{1}), FunctionalSpec(functional::Quantile{0.75}));
    ASSERT_TRUE(v3);
    EXPECT_NEAR(scalar_of(*v3), std::log(4.0), 1e-12);
}

TEST(AnalyticFunctional, PowerMeanAgreesWithMonteCarlo) {
    const DistributionSpec d(dist::Lognormal{0, 1});
    const auto est = mc_expectation([](double y) { return y * y; }, d, 1'000'000, Seed{4});
    // delta method: se of sqrt(m) is se / (2 sqrt(m))
    const double mc = std::sqrt(est.value);
    EXPECT_LE(std::abs(mc - std::exp(1.0)), 3 * est.std_error / (2 * mc));
}

TEST(AnalyticFunctional, SupportMismatchIsDomainError) {
    EXPECT_THROW(analytic_functional(DistributionSpec(dist::Normal{0, 1}),
                                     FunctionalSpec(functional::GTransformedExpectation{catalog("log")})),
                 DomainError);
}

TEST(EmpiricalQuantile, IntervalOfSolutions) {
    const auto i = empirical_quantile_interval({1, 1, 2, 2}, 0.5);
    EXPECT_EQ(i.lo, 1.0);
    EXPECT_EQ(i.hi, 2.0);
    const auto s = empirical_quantile_interval({3, 1, 2}, 0.5);
    EXPECT_EQ(s.lo, 2.0);
    EXPECT_EQ(s.hi, 2.0);
    const auto v = analytic_functional(DistributionSpec(dist::Empirical{{1, 1, 2, 2}}), FunctionalSpec(functional::Quantile{0.5}));
    ASSERT_TRUE(v);
    ASSERT_TRUE(std::holds_alternative<ValueInterval>(*v));
}

TEST(Distribution, ParseAndValidate) {
    EXPECT_EQ(parse_distribution("lognormal(0.5,2)").to_string(), "lognormal(0.5,2)");
    EXPECT_EQ(parse_distribution("empirical(1,2,3)").to_string(), "empirical(1,2,3)");
    EXPECT_THROW(parse_distribution("normal(0,-1)"), ParameterError);
    EXPECT_THROW(parse_distribution("uniform(1,1)"), ParameterError);
    EXPECT_THROW(parse_distribution("cauchy(0,1)"), ParseError);
    EXPECT_THROW(parse_distribution("empirical()"), ParameterError);
}
