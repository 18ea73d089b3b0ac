#include "elicit/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

namespace elicit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_tau(double tau, std::string_view what) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ParameterError(std::string(what) + " requires tau in (0,1), got " +
                             text::format_double(tau));
    }
}

double sample_sd(std::span<const double> v) {
    const auto s = summarize(v);
    return s.std_error * std::sqrt(static_cast<double>(s.n));
}

/// Standard error of the empirical tau-expectile e of `u` by the sandwich formula.
double expectile_std_error(std::span<const double> u, double tau, double e) {
    std::vector<double> v(u.size());
    double slope = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = std::abs((e >= u[i] ? 1.0 : 0.0) - tau);
        v[i] = 2.0 * w * (e - u[i]);
        slope += 2.0 * w;
    }
    slope /= static_cast<double>(u.size());
    return sample_sd(v) / std::sqrt(static_cast<double>(u.size())) / slope;
}

/// Value of the functional on the empirical law of `draws`, with standard errors.
FunctionalEstimate empirical_estimate(const FunctionalSpec& spec, std::vector<double> draws) {
    namespace fn = functional;
    const double rn = std::sqrt(static_cast<double>(draws.size()));
    const DistributionSpec empirical(dist::Empirical{draws});
    const auto value = analytic_functional(empirical, spec);
    if (!value) {
        throw PreconditionError("no empirical evaluation for " + spec.to_string());
    }
    FunctionalEstimate est{*value, {}, false, "monte carlo, n=" + std::to_string(draws.size())};
    const auto pulled = [](const Bijection& g, double se, double at) {
        return se / std::abs(g.deriv(at));
    };
    const auto image = [&](const Bijection& g) {
        std::vector<double> u(draws.size());
        std::transform(draws.begin(), draws.end(), u.begin(), [&](double y) { return g.apply(y); });
        return u;
    };
    std::visit(overloaded{
                   [&](const fn::Mean&) { est.std_error = {sample_sd(draws) / rn}; },
                   [&](const fn::Quantile&) {
                       est.std_error = {0.0};
                       est.note += "; quantile interval, no standard error";
                   },
                   [&](const fn::Expectile& e) {
                       est.std_error = {expectile_std_error(draws, e.tau, scalar_of(est.value))};
                   },
                   [&](const fn::GTransformedExpectation& t) {
                       const double z = scalar_of(est.value);
                       est.std_error = {pulled(t.g, sample_sd(image(t.g)) / rn, z)};
                   },
                   [&](const fn::GTransformedExpectile& t) {
                       const double z = scalar_of(est.value);
                       const auto u = image(t.g);
                       est.std_error = {pulled(t.g, expectile_std_error(u, t.tau, t.g.apply(z)), z)};
                   },
                   [&](const fn::MeanVariancePair& t) {
                       auto u = image(t.g);
                       const auto m = summarize(u);
                       for (double& x : u) {
                           x = (x - m.value) * (x - m.value);
                       }
                       est.std_error = {m.std_error, sample_sd(u) / rn};
                   },
               },
               spec.kind());
    return est;
}

std::vector<double> zero_errors(const FunctionalValue& v) {
    return std::holds_alternative<ValuePair>(v) ? std::vector<double>{0.0, 0.0}
                                                : std::vector<double>{0.0};
}

FunctionalEstimate closed_form(FunctionalValue v, std::string note) {
    auto errors = zero_errors(v);
    return {std::move(v), std::move(errors), true, std::move(note)};
}

}  // namespace

FunctionalSpec::FunctionalSpec(Kind kind) : kind_(std::move(kind)) {
    namespace fn = functional;
    std::visit(overloaded{
                   [](const fn::Quantile& q) { require_tau(q.tau, "quantile"); },
                   [](const fn::Expectile& e) { require_tau(e.tau, "expectile"); },
                   [](const fn::GTransformedExpectation& t) {
                       if (!t.g.invertible()) {
                           throw ParameterError("g-transformed expectation needs an invertible g, got " +
                                                t.g.to_string());
                       }
                   },
                   [](const fn::GTransformedExpectile& t) {
                       require_tau(t.tau, "g-transformed expectile");
                       if (!t.g.invertible()) {
                           throw ParameterError("g-transformed expectile needs an invertible g, got " +
                                                t.g.to_string());
                       }
                   },
                   [](const auto&) {},
               },
               kind_);
}

bool FunctionalSpec::is_transformed() const {
    namespace fn = functional;
    return std::visit(overloaded{
                          [](const fn::GTransformedExpectation&) { return true; },
                          [](const fn::GTransformedExpectile&) { return true; },
                          [](const fn::MeanVariancePair& p) { return !p.g.is_identity(); },
                          [](const auto&) { return false; },
                      },
                      kind_);
}

std::string FunctionalSpec::to_string() const {
    namespace fn = functional;
    const auto f = [](double x) { return text::format_double(x); };
    return std::visit(
        overloaded{
            [](const fn::Mean&) { return std::string("mean"); },
            [&](const fn::Quantile& q) { return "quantile:tau=" + f(q.tau); },
            [&](const fn::Expectile& e) { return "expectile:tau=" + f(e.tau); },
            [](const fn::GTransformedExpectation& t) { return "gmean:g=" + t.g.to_string(); },
            [&](const fn::GTransformedExpectile& t) {
                return "gexpectile:tau=" + f(t.tau) + ":g=" + t.g.to_string();
            },
            [](const fn::MeanVariancePair& p) {
                return p.g.is_identity() ? std::string("mvpair") : "mvpair:g=" + p.g.to_string();
            },
        },
        kind_);
}

FunctionalSpec parse_functional_spec(std::string_view text) {
    namespace fn = functional;
    const auto tagged = text::parse_tagged(text);
    std::size_t used = 0;
    const auto option = [&](std::string_view key) -> const std::string& {
        const auto it = tagged.options.find(key);
        if (it == tagged.options.end()) {
            throw ParseError("functional '" + tagged.head + "' requires " + std::string(key) + "=");
        }
        ++used;
        return it->second;
    };
    const auto tau = [&] { return text::parse_double(option("tau"), "tau"); };
    const auto g = [&] { return parse_bijection(option("g")); };
    const auto finish = [&](auto kind) {
        if (used != tagged.options.size()) {
            throw ParseError("unexpected option in functional spec '" + std::string(text) + "'");
        }
        return FunctionalSpec(std::move(kind));
    };
    if (tagged.head == "mean") {
        return finish(fn::Mean{});
    }
    if (tagged.head == "quantile") {
        return finish(fn::Quantile{tau()});
    }
    if (tagged.head == "expectile") {
        return finish(fn::Expectile{tau()});
    }
    if (tagged.head == "gmean") {
        return finish(fn::GTransformedExpectation{g()});
    }
    if (tagged.head == "gexpectile") {
        const double t = tau();
        return finish(fn::GTransformedExpectile{t, g()});
    }
    if (tagged.head == "mvpair") {
        const Bijection pg = tagged.options.contains("g") ? g() : Bijection();
        return finish(fn::MeanVariancePair{pg});
    }
    throw ParseError("unknown functional '" + tagged.head + "'");
}

double scalar_of(const FunctionalValue& v) {
    return std::visit(overloaded{
                          [](double x) { return x; },
                          [](const ValueInterval& i) { return i.lo; },
                          [](const ValuePair&) -> double {
                              throw PreconditionError("a pair-valued functional has no scalar value");
                          },
                      },
                      v);
}

double capping(double a, double b, double t) {
    if (!(a >= 0.0) || !(b >= 0.0)) {
        throw DomainError("capping needs a, b in [0, inf]");
    }
    return std::max(std::min(t, b), -a);
}

double pulled_back_quantile_level(const Bijection& g, double tau) {
    switch (g.monotonicity()) {
        case Monotonicity::increasing:
            return tau;
        case Monotonicity::decreasing:
            return 1.0 - tau;
        case Monotonicity::none:
            break;
    }
    throw PreconditionError("quantile mapping needs a monotone g, got " + g.to_string());
}

FunctionalEstimate functional_value(const FunctionalSpec& spec, const DistributionSpec& d,
                                    std::size_t n, Seed seed) {
    if (auto v = analytic_functional(d, spec)) {
        return closed_form(std::move(*v), "closed form");
    }
    if (n < 2) {
        throw PreconditionError("monte carlo functional needs n >= 2");
    }
    return empirical_estimate(spec, sample_iid(d, n, seed));
}

FunctionalEstimate image_functional_value(const FunctionalSpec& spec, const DistributionSpec& d,
                                          const Bijection& g, std::size_t n, Seed seed) {
    namespace fn = functional;
    require_support_in_domain(d, g);
    if (g.is_identity()) {
        return functional_value(spec, d, n, seed);
    }
    // Closed forms through g(T_g(F)), when the pulled-back functional has one.
    std::optional<FunctionalEstimate> shortcut = std::visit(
        overloaded{
            [&](const fn::Mean&) -> std::optional<FunctionalEstimate> {
                if (g.kind() == Bijection::Kind::square) {
                    const double m = mean(d);
                    return closed_form(m * m + variance(d), "closed form E[Y^2]");
                }
                if (auto v = analytic_functional(d, FunctionalSpec(fn::GTransformedExpectation{g}))) {
                    return closed_form(g.apply(scalar_of(*v)), "closed form g(T_g)");
                }
                return std::nullopt;
            },
            [&](const fn::Quantile& q) -> std::optional<FunctionalEstimate> {
                if (!g.invertible() || !d.is_continuous()) {
                    return std::nullopt;
                }
                const double level = pulled_back_quantile_level(g, q.tau);
                return closed_form(g.apply(quantile(d, level)), "closed form g(Q)");
            },
            [&](const fn::Expectile& e) -> std::optional<FunctionalEstimate> {
                if (!g.invertible()) {
                    return std::nullopt;
                }
                if (auto v = analytic_functional(d, FunctionalSpec(fn::GTransformedExpectile{e.tau, g}))) {
                    return closed_form(g.apply(scalar_of(*v)), "closed form g(T_g)");
                }
                return std::nullopt;
            },
            [&](const fn::MeanVariancePair& p) -> std::optional<FunctionalEstimate> {
                if (!p.g.is_identity()) {
                    return std::nullopt;
                }
                if (auto v = analytic_functional(d, FunctionalSpec(fn::MeanVariancePair{g}))) {
                    return closed_form(*v, "closed form");
                }
                return std::nullopt;
            },
            [](const auto&) -> std::optional<FunctionalEstimate> { return std::nullopt; },
        },
        spec.kind());
    if (shortcut) {
        return *shortcut;
    }
    if (n < 2) {
        throw PreconditionError("monte carlo functional needs n >= 2");
    }
    auto draws = sample_iid(d, n, seed);
    for (double& y : draws) {
        y = g.apply(y);
    }
    return empirical_estimate(spec, std::move(draws));
}

}  // namespace elicit
