#include "elicit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

namespace elicit {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt2pi = 0.39894228040143267794;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * inv_sqrt2); }

double std_normal_pdf(double x) { return inv_sqrt2pi * std::exp(-0.5 * x * x); }

double std_normal_quantile(double tau) {
    return -1.0 / inv_sqrt2 * boost::math::erfc_inv(2.0 * tau);
}

void require_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ParameterError("tau must lie in (0,1), got " + text::format_double(tau));
    }
}

double sample_mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_population_variance(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double acc = 0.0;
    for (double x : v) {
        acc += (x - m) * (x - m);
    }
    return acc / static_cast<double>(v.size());
}

std::vector<double> transformed(const std::vector<double>& values, const Bijection& g) {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return g.apply(v); });
    return out;
}

/// Root of (1 - tau)(z - m + P(z)) - tau P(z), which is increasing in z.
double solve_expectile(const DistributionSpec& d, double tau) {
    require_tau(tau);
    double lo = 0.0;
    double hi = 0.0;
    if (const auto* e = std::get_if<dist::Empirical>(&d.variant())) {
        const auto [mn, mx] = std::minmax_element(e->values.begin(), e->values.end());
        if (*mn == *mx) {
            return *mn;
        }
        lo = *mn;
        hi = *mx;
    } else {
        lo = quantile(d, 1e-12);
        hi = quantile(d, 1.0 - 1e-12);
    }
    const double m = mean(d);
    const auto f = [&](double z) {
        const double upper = upper_partial_moment(d, z);
        return (1.0 - tau) * (z - m + upper) - tau * upper;
    };
    const double tol = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return root1d(f, Bracket(lo, hi), tol);
}

double lognormal_mean(double mu, double sigma) { return std::exp(mu + 0.5 * sigma * sigma); }

double lognormal_variance(double mu, double sigma) {
    const double s2 = sigma * sigma;
    return std::expm1(s2) * std::exp(2.0 * mu + s2);
}

bool is_log_like(const Bijection& g) {
    return g.kind() == Bijection::Kind::log ||
           (g.kind() == Bijection::Kind::box_cox && g.params().at(0) == 0.0);
}

}  // namespace

DistributionSpec::DistributionSpec(Variant v) : v_(std::move(v)) {
    const auto finite = [](std::initializer_list<double> xs) {
        return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
    };
    std::visit(overloaded{
                   [&](const dist::Normal& n) {
                       if (!finite({n.mu, n.sigma}) || !(n.sigma > 0.0)) {
                           throw ParameterError("normal requires finite mu and sigma > 0");
                       }
                   },
                   [&](const dist::Lognormal& n) {
                       if (!finite({n.mu, n.sigma}) || !(n.sigma > 0.0)) {
                           throw ParameterError("lognormal requires finite mu and sigma > 0");
                       }
                   },
                   [&](const dist::Exponential& e) {
                       if (!finite({e.lambda}) || !(e.lambda > 0.0)) {
                           throw ParameterError("exponential requires lambda > 0");
                       }
                   },
                   [&](const dist::Uniform& u) {
                       if (!finite({u.a, u.b}) || !(u.b > u.a)) {
                           throw ParameterError("uniform requires finite a < b");
                       }
                   },
                   [&](const dist::Empirical& e) {
                       if (e.values.empty()) {
                           throw ParameterError("empirical distribution needs at least one value");
                       }
                       if (!std::all_of(e.values.begin(), e.values.end(),
                                        [](double x) { return std::isfinite(x); })) {
                           throw ParameterError("empirical values must be finite");
                       }
                   },
               },
               v_);
}

Interval DistributionSpec::support() const {
    return std::visit(overloaded{
                          [](const dist::Normal&) { return Interval::real_line(); },
                          [](const dist::Lognormal&) { return Interval::open(0.0, inf); },
                          [](const dist::Exponential&) { return Interval::open(0.0, inf); },
                          [](const dist::Uniform& u) { return Interval::open(u.a, u.b); },
                          [](const dist::Empirical& e) {
                              const auto [mn, mx] =
                                  std::minmax_element(e.values.begin(), e.values.end());
                              return Interval{*mn, *mx, true, true};
                          },
                      },
                      v_);
}

std::string DistributionSpec::to_string() const {
    const auto f = [](double x) { return text::format_double(x); };
    return std::visit(
        overloaded{
            [&](const dist::Normal& n) { return "normal(" + f(n.mu) + "," + f(n.sigma) + ")"; },
            [&](const dist::Lognormal& n) {
                return "lognormal(" + f(n.mu) + "," + f(n.sigma) + ")";
            },
            [&](const dist::Exponential& e) { return "exponential(" + f(e.lambda) + ")"; },
            [&](const dist::Uniform& u) { return "uniform(" + f(u.a) + "," + f(u.b) + ")"; },
            [&](const dist::Empirical& e) {
                std::string out = "empirical(";
                for (std::size_t i = 0; i < e.values.size(); ++i) {
                    out += (i ? "," : "") + f(e.values[i]);
                }
                return out + ")";
            },
        },
        v_);
}

DistributionSpec parse_distribution(std::string_view text) {
    const auto call = text::parse_call(text);
    const auto want = [&](std::size_t k) {
        if (call.args.size() != k) {
            throw ParseError("distribution '" + call.name + "' takes " + std::to_string(k) +
                             " parameter(s)");
        }
    };
    if (call.name == "normal") {
        want(2);
        return DistributionSpec(dist::Normal{call.args[0], call.args[1]});
    }
    if (call.name == "lognormal") {
        want(2);
        return DistributionSpec(dist::Lognormal{call.args[0], call.args[1]});
    }
    if (call.name == "exponential") {
        want(1);
        return DistributionSpec(dist::Exponential{call.args[0]});
    }
    if (call.name == "uniform") {
        want(2);
        return DistributionSpec(dist::Uniform{call.args[0], call.args[1]});
    }
    if (call.name == "empirical") {
        return DistributionSpec(dist::Empirical{call.args});
    }
    throw ParseError("unknown distribution '" + call.name + "'");
}

std::vector<double> sample_iid(const DistributionSpec& d, std::size_t n, Seed seed) {
    if (n < 1) {
        throw PreconditionError("sample_iid requires n >= 1");
    }
    std::mt19937_64 rng(seed.value);
    std::vector<double> out(n);
    std::visit(overloaded{
                   [&](const dist::Normal& p) {
                       std::normal_distribution<double> draw(p.mu, p.sigma);
                       for (auto& y : out) {
                           y = draw(rng);
                       }
                   },
                   [&](const dist::Lognormal& p) {
                       std::normal_distribution<double> draw(p.mu, p.sigma);
                       for (auto& y : out) {
                           y = std::exp(draw(rng));
                       }
                   },
                   [&](const dist::Exponential& p) {
                       std::exponential_distribution<double> draw(p.lambda);
                       for (auto& y : out) {
                           do {
                               y = draw(rng);
                           } while (y <= 0.0);
                       }
                   },
                   [&](const dist::Uniform& p) {
                       std::uniform_real_distribution<double> draw(p.a, p.b);
                       for (auto& y : out) {
                           do {
                               y = draw(rng);
                           } while (y <= p.a);
                       }
                   },
                   [&](const dist::Empirical& p) {
                       std::uniform_int_distribution<std::size_t> pick(0, p.values.size() - 1);
                       for (auto& y : out) {
                           y = p.values[pick(rng)];
                       }
                   },
               },
               d.variant());
    return out;
}

double cdf(const DistributionSpec& d, double y) {
    return std::visit(
        overloaded{
            [&](const dist::Normal& p) { return std_normal_cdf((y - p.mu) / p.sigma); },
            [&](const dist::Lognormal& p) {
                return y <= 0.0 ? 0.0 : std_normal_cdf((std::log(y) - p.mu) / p.sigma);
            },
            [&](const dist::Exponential& p) { return y <= 0.0 ? 0.0 : -std::expm1(-p.lambda * y); },
            [&](const dist::Uniform& p) { return std::clamp((y - p.a) / (p.b - p.a), 0.0, 1.0); },
            [&](const dist::Empirical& p) {
                const auto count = std::count_if(p.values.begin(), p.values.end(),
                                                 [&](double v) { return v <= y; });
                return static_cast<double>(count) / static_cast<double>(p.values.size());
            },
        },
        d.variant());
}

double quantile(const DistributionSpec& d, double tau) {
    require_tau(tau);
    return std::visit(
        overloaded{
            [&](const dist::Normal& p) { return p.mu + p.sigma * std_normal_quantile(tau); },
            [&](const dist::Lognormal& p) {
                return std::exp(p.mu + p.sigma * std_normal_quantile(tau));
            },
            [&](const dist::Exponential& p) { return -std::log1p(-tau) / p.lambda; },
            [&](const dist::Uniform& p) { return p.a + tau * (p.b - p.a); },
            [&](const dist::Empirical&) -> double {
                throw PreconditionError(
                    "empirical quantiles are set-valued; use empirical_quantile_interval");
            },
        },
        d.variant());
}

double mean(const DistributionSpec& d) {
    return std::visit(overloaded{
                          [](const dist::Normal& p) { return p.mu; },
                          [](const dist::Lognormal& p) { return lognormal_mean(p.mu, p.sigma); },
                          [](const dist::Exponential& p) { return 1.0 / p.lambda; },
                          [](const dist::Uniform& p) { return 0.5 * (p.a + p.b); },
                          [](const dist::Empirical& p) { return sample_mean(p.values); },
                      },
                      d.variant());
}

double variance(const DistributionSpec& d) {
    return std::visit(
        overloaded{
            [](const dist::Normal& p) { return p.sigma * p.sigma; },
            [](const dist::Lognormal& p) { return lognormal_variance(p.mu, p.sigma); },
            [](const dist::Exponential& p) { return 1.0 / (p.lambda * p.lambda); },
            [](const dist::Uniform& p) { return (p.b - p.a) * (p.b - p.a) / 12.0; },
            [](const dist::Empirical& p) { return sample_population_variance(p.values); },
        },
        d.variant());
}

double upper_partial_moment(const DistributionSpec& d, double z) {
    return std::visit(
        overloaded{
            [&](const dist::Normal& p) {
                const double s = (z - p.mu) / p.sigma;
                return p.sigma * (std_normal_pdf(s) - s * (1.0 - std_normal_cdf(s)));
            },
            [&](const dist::Lognormal& p) {
                if (z <= 0.0) {
                    return lognormal_mean(p.mu, p.sigma) - z;
                }
                const double d1 = (p.mu + p.sigma * p.sigma - std::log(z)) / p.sigma;
                return lognormal_mean(p.mu, p.sigma) * std_normal_cdf(d1) -
                       z * std_normal_cdf(d1 - p.sigma);
            },
            [&](const dist::Exponential& p) {
                if (z <= 0.0) {
                    return 1.0 / p.lambda - z;
                }
                return std::exp(-p.lambda * z) / p.lambda;
            },
            [&](const dist::Uniform& p) {
                if (z <= p.a) {
                    return 0.5 * (p.a + p.b) - z;
                }
                if (z >= p.b) {
                    return 0.0;
                }
                return (p.b - z) * (p.b - z) / (2.0 * (p.b - p.a));
            },
            [&](const dist::Empirical& p) {
                double acc = 0.0;
                for (double v : p.values) {
                    acc += std::max(v - z, 0.0);
                }
                return acc / static_cast<double>(p.values.size());
            },
        },
        d.variant());
}

ValueInterval empirical_quantile_interval(std::vector<double> values, double tau) {
    require_tau(tau);
    if (values.empty()) {
        throw PreconditionError("empirical quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    const double pos = static_cast<double>(n) * tau;
    const double k_round = std::round(pos);
    const auto at = [&](std::size_t rank) { return values[rank - 1]; };  // 1-based order stats
    if (std::abs(pos - k_round) <= 1e-12 * static_cast<double>(n)) {
        // F jumps to exactly tau at the k-th order statistic: the whole gap up
        // to the next order statistic satisfies F(z-) <= tau <= F(z).
        const auto k = static_cast<std::size_t>(k_round);
        if (k == 0) {
            return {at(1), at(1)};
        }
        if (k >= n) {
            return {at(n), at(n)};
        }
        return {at(k), at(k + 1)};
    }
    const auto k = static_cast<std::size_t>(std::ceil(pos));
    return {at(k), at(k)};
}

void require_support_in_domain(const DistributionSpec& d, const Bijection& g) {
    if (const auto* e = std::get_if<dist::Empirical>(&d.variant())) {
        for (std::size_t i = 0; i < e->values.size(); ++i) {
            if (!g.domain().contains(e->values[i])) {
                std::ostringstream msg;
                msg << "empirical value #" << i << " = " << e->values[i]
                    << " outside domain " << g.domain().to_string() << " of " << g.to_string();
                throw DomainError(msg.str());
            }
        }
        return;
    }
    const auto s = d.support();
    if (!g.domain().covers_open(s.lo, s.hi)) {
        throw DomainError("support " + s.to_string() + " of " + d.to_string() +
                          " is not inside domain " + g.domain().to_string() + " of " +
                          g.to_string());
    }
}

std::optional<FunctionalValue> analytic_functional(const DistributionSpec& d,
                                                   const FunctionalSpec& f) {
    namespace fn = functional;
    const auto* empirical = std::get_if<dist::Empirical>(&d.variant());
    const auto* lognormal = std::get_if<dist::Lognormal>(&d.variant());
    const auto* normal = std::get_if<dist::Normal>(&d.variant());

    return std::visit(
        overloaded{
            [&](const fn::Mean&) -> std::optional<FunctionalValue> { return mean(d); },
            [&](const fn::Quantile& q) -> std::optional<FunctionalValue> {
                if (empirical) {
                    return empirical_quantile_interval(empirical->values, q.tau);
                }
                return quantile(d, q.tau);
            },
            [&](const fn::Expectile& e) -> std::optional<FunctionalValue> {
                return solve_expectile(d, e.tau);
            },
            [&](const fn::GTransformedExpectation& t) -> std::optional<FunctionalValue> {
                const auto& g = t.g;
                require_support_in_domain(d, g);
                if (g.kind() == Bijection::Kind::identity || g.kind() == Bijection::Kind::negate) {
                    return mean(d);
                }
                if (empirical) {
                    return g.invert(sample_mean(transformed(empirical->values, g)));
                }
                if (lognormal) {
                    const double s2 = lognormal->sigma * lognormal->sigma;
                    if (is_log_like(g)) {
                        return std::exp(lognormal->mu);
                    }
                    if (g.kind() == Bijection::Kind::power || g.kind() == Bijection::Kind::box_cox) {
                        const double a = g.params().at(0);
                        return std::exp(lognormal->mu + 0.5 * a * s2);
                    }
                }
                if (normal) {
                    const double s2 = normal->sigma * normal->sigma;
                    if (g.kind() == Bijection::Kind::exp) {
                        return normal->mu + 0.5 * s2;
                    }
                    if (g.kind() == Bijection::Kind::affine_exp) {
                        return normal->mu + 0.5 * g.params().at(0) * s2;
                    }
                }
                return std::nullopt;
            },
            [&](const fn::GTransformedExpectile& t) -> std::optional<FunctionalValue> {
                const auto& g = t.g;
                require_support_in_domain(d, g);
                require_tau(t.tau);
                if (g.kind() == Bijection::Kind::identity) {
                    return solve_expectile(d, t.tau);
                }
                if (empirical) {
                    const DistributionSpec image(dist::Empirical{transformed(empirical->values, g)});
                    return g.invert(solve_expectile(image, t.tau));
                }
                if (lognormal && is_log_like(g)) {
                    const DistributionSpec image(dist::Normal{lognormal->mu, lognormal->sigma});
                    return std::exp(solve_expectile(image, t.tau));
                }
                if (lognormal && g.kind() == Bijection::Kind::power) {
                    const double a = g.params().at(0);
                    const DistributionSpec image(
                        dist::Lognormal{a * lognormal->mu, std::abs(a) * lognormal->sigma});
                    return g.invert(solve_expectile(image, t.tau));
                }
                if (normal && g.kind() == Bijection::Kind::exp) {
                    const DistributionSpec image(dist::Lognormal{normal->mu, normal->sigma});
                    return std::log(solve_expectile(image, t.tau));
                }
                return std::nullopt;
            },
            [&](const fn::MeanVariancePair& t) -> std::optional<FunctionalValue> {
                const auto& g = t.g;
                require_support_in_domain(d, g);
                if (g.kind() == Bijection::Kind::identity) {
                    return ValuePair{mean(d), variance(d)};
                }
                if (empirical) {
                    const auto image = transformed(empirical->values, g);
                    return ValuePair{sample_mean(image), sample_population_variance(image)};
                }
                if (lognormal && g.kind() == Bijection::Kind::log) {
                    return ValuePair{lognormal->mu, lognormal->sigma * lognormal->sigma};
                }
                if (lognormal && g.kind() == Bijection::Kind::power) {
                    const double a = g.params().at(0);
                    const double mu = a * lognormal->mu;
                    const double sigma = std::abs(a) * lognormal->sigma;
                    return ValuePair{lognormal_mean(mu, sigma), lognormal_variance(mu, sigma)};
                }
                if (normal && g.kind() == Bijection::Kind::exp) {
                    return ValuePair{lognormal_mean(normal->mu, normal->sigma),
                                     lognormal_variance(normal->mu, normal->sigma)};
                }
                if (g.kind() == Bijection::Kind::negate) {
                    return ValuePair{-mean(d), variance(d)};
                }
                return std::nullopt;
            },
        },
        f.kind());
}

}  // namespace elicit
