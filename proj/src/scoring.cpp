#include "elicit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

namespace elicit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_tau(double tau, std::string_view family) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ParameterError(std::string(family) + " requires tau in (0,1), got " +
                             text::format_double(tau));
    }
}

void require_generator(const ConvexGenerator& phi) {
    if (!phi.value || !phi.slope) {
        throw ParameterError("convex generator '" + phi.name + "' needs value and slope");
    }
}

double indicator(double z, double y) { return z >= y ? 1.0 : 0.0; }

Interval intersect(const Interval& a, const Interval& b) {
    Interval out = a;
    if (b.lo > out.lo || (b.lo == out.lo && !b.lo_closed)) {
        out.lo = b.lo;
        out.lo_closed = b.lo_closed;
    }
    if (b.hi < out.hi || (b.hi == out.hi && !b.hi_closed)) {
        out.hi = b.hi;
        out.hi_closed = b.hi_closed;
    }
    return out;
}

/// Realization-side auxiliary value of a family (phi(y) or g(y)); 0 when unused.
double aux_of(const ScoreSpec::Family& family, double yt) {
    return std::visit(overloaded{
                          [&](const score::GeneralizedPiecewiseLinear& s) { return s.inner.apply(yt); },
                          [&](const score::Expectile& s) { return s.phi.value(yt); },
                          [&](const score::Bregman& s) { return s.phi.value(yt); },
                          [](const auto&) { return 0.0; },
                      },
                      family);
}

/// Core kernel: calls sink(i, S(zt, yt[i])) on already-transformed arguments.
template <class Sink>
void for_each_score(const ScoreSpec::Family& family, double zt, std::span<const double> yt,
                    std::span<const double> aux, Sink&& sink) {
    const std::size_t n = yt.size();
    std::visit(overloaded{
                   [&](const score::SquaredError&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           const double d = zt - yt[i];
                           sink(i, d * d);
                       }
                   },
                   [&](const score::AbsoluteError&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, std::abs(zt - yt[i]));
                       }
                   },
                   [&](const score::GeneralizedPiecewiseLinear& s) {
                       const double gz = s.inner.apply(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, (indicator(zt, yt[i]) - s.tau) * (gz - aux[i]));
                       }
                   },
                   [&](const score::AsymmetricPiecewiseLinear& s) {
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, (indicator(zt, yt[i]) - s.tau) * (zt - yt[i]));
                       }
                   },
                   [&](const score::Expectile& s) {
                       const double pz = s.phi.value(zt);
                       const double dz = s.phi.slope(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           const double w = std::abs(indicator(zt, yt[i]) - s.tau);
                           sink(i, w * (aux[i] - pz + dz * (zt - yt[i])));
                       }
                   },
                   [&](const score::Bregman& s) {
                       const double pz = s.phi.value(zt);
                       const double dz = s.phi.slope(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, 0.5 * (aux[i] - pz + dz * (zt - yt[i])));
                       }
                   },
                   [&](const score::MeanVariance&) {
                       throw PreconditionError("mean-variance score needs a (mean, variance) prediction");
                   },
               },
               family);
}

/// sink(i, dS/dzt) on transformed arguments.
template <class Sink>
void for_each_derivative(const ScoreSpec::Family& family, double zt, std::span<const double> yt,
                         Sink&& sink) {
    const std::size_t n = yt.size();
    const auto need_curvature = [](const ConvexGenerator& phi) -> const std::function<double(double)>& {
        if (!phi.curvature) {
            throw PreconditionError("generator '" + phi.name + "' has no second derivative");
        }
        return *phi.curvature;
    };
    std::visit(overloaded{
                   [&](const score::SquaredError&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, 2.0 * (zt - yt[i]));
                       }
                   },
                   [&](const score::AbsoluteError&) {
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, zt >= yt[i] ? 1.0 : -1.0);
                       }
                   },
                   [&](const score::GeneralizedPiecewiseLinear& s) {
                       const double slope = s.inner.deriv(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, (indicator(zt, yt[i]) - s.tau) * slope);
                       }
                   },
                   [&](const score::AsymmetricPiecewiseLinear& s) {
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, indicator(zt, yt[i]) - s.tau);
                       }
                   },
                   [&](const score::Expectile& s) {
                       const double curv = need_curvature(s.phi)(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, std::abs(indicator(zt, yt[i]) - s.tau) * curv * (zt - yt[i]));
                       }
                   },
                   [&](const score::Bregman& s) {
                       const double curv = need_curvature(s.phi)(zt);
                       for (std::size_t i = 0; i < n; ++i) {
                           sink(i, 0.5 * curv * (zt - yt[i]));
                       }
                   },
                   [&](const score::MeanVariance&) {
                       throw PreconditionError("score_derivative is defined for scalar predictions");
                   },
               },
               family);
}

double mean_variance_score(MeanVarPrediction x, double yt) {
    return (x.mean * x.mean - 2.0 * x.variance - 2.0 * x.mean * yt + yt * yt) /
           (x.variance * x.variance);
}

void require_positive_variance(MeanVarPrediction x) {
    if (!(x.variance > 0.0)) {
        throw DomainError("mean-variance prediction requires variance > 0, got " +
                          text::format_double(x.variance));
    }
}

std::string with_index(std::size_t i, const std::exception& e) {
    return "at index " + std::to_string(i) + ": " + e.what();
}

}  // namespace

ConvexGenerator square_generator() {
    return {"square", [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
            [](double) { return 2.0; }, true};
}

ConvexGenerator exp_generator() {
    return {"exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); },
            [](double t) { return std::exp(t); }, true};
}

ConvexGenerator generator_by_name(std::string_view name) {
    if (name == "square") {
        return square_generator();
    }
    if (name == "exp") {
        return exp_generator();
    }
    throw ParseError("unknown convex generator '" + std::string(name) + "'");
}

ScoreSpec::ScoreSpec(Family family, TransformMode mode)
    : family_(std::move(family)), mode_(std::move(mode)) {
    std::visit(overloaded{
                   [](const score::GeneralizedPiecewiseLinear& s) {
                       require_tau(s.tau, "gpl");
                       if (s.inner.monotonicity() != Monotonicity::increasing) {
                           throw ParameterError("gpl requires an increasing inner transform, got " +
                                                s.inner.to_string());
                       }
                   },
                   [](const score::AsymmetricPiecewiseLinear& s) { require_tau(s.tau, "apl"); },
                   [](const score::Expectile& s) {
                       require_tau(s.tau, "expectile");
                       require_generator(s.phi);
                   },
                   [](const score::Bregman& s) { require_generator(s.phi); },
                   [](const auto&) {},
               },
               family_);
    if (is_pair() && mode_.kind() != TransformKind::none &&
        mode_.kind() != TransformKind::realization) {
        throw ParameterError("mean-variance score admits only modes none and realization");
    }
}

bool ScoreSpec::is_piecewise() const {
    return std::holds_alternative<score::AbsoluteError>(family_) ||
           std::holds_alternative<score::GeneralizedPiecewiseLinear>(family_) ||
           std::holds_alternative<score::AsymmetricPiecewiseLinear>(family_);
}

bool ScoreSpec::has_zero_optimum() const { return !is_pair(); }

std::string_view ScoreSpec::family_name() const {
    return std::visit(overloaded{
                          [](const score::SquaredError&) { return "se"; },
                          [](const score::AbsoluteError&) { return "ae"; },
                          [](const score::GeneralizedPiecewiseLinear&) { return "gpl"; },
                          [](const score::AsymmetricPiecewiseLinear&) { return "apl"; },
                          [](const score::Expectile&) { return "expectile"; },
                          [](const score::Bregman&) { return "bregman"; },
                          [](const score::MeanVariance&) { return "mv"; },
                      },
                      family_);
}

Interval ScoreSpec::prediction_domain() const {
    auto dom = mode_.prediction_domain();
    if (const auto* s = std::get_if<score::GeneralizedPiecewiseLinear>(&family_)) {
        if (mode_.kind() == TransformKind::none || mode_.kind() == TransformKind::realization) {
            dom = intersect(dom, s->inner.domain());
        }
    }
    return dom;
}

std::string ScoreSpec::to_string() const {
    const auto f = [](double x) { return text::format_double(x); };
    std::string head = std::visit(
        overloaded{
            [](const score::SquaredError&) { return std::string("se"); },
            [](const score::AbsoluteError&) { return std::string("ae"); },
            [&](const score::GeneralizedPiecewiseLinear& s) {
                std::string out = "gpl:tau=" + f(s.tau);
                if (!s.inner.is_identity()) {
                    out += ":g=" + s.inner.to_string();
                }
                return out;
            },
            [&](const score::AsymmetricPiecewiseLinear& s) { return "apl:tau=" + f(s.tau); },
            [&](const score::Expectile& s) { return "expectile:tau=" + f(s.tau) + ":phi=" + s.phi.name; },
            [&](const score::Bregman& s) { return "bregman:phi=" + s.phi.name; },
            [](const score::MeanVariance&) { return std::string("mv"); },
        },
        family_);
    return head + mode_.suffix();
}

ScoreSpec parse_score_spec(std::string_view text) {
    const auto at = text.find('@');
    const auto tagged = text::parse_tagged(text.substr(0, at));
    TransformMode mode;
    if (at != std::string_view::npos) {
        mode = parse_transform_mode(text.substr(at + 1));
    }
    std::vector<std::string> allowed;
    const auto option = [&](std::string_view key) -> std::optional<std::string> {
        allowed.emplace_back(key);
        const auto it = tagged.options.find(key);
        if (it == tagged.options.end()) {
            return std::nullopt;
        }
        return it->second;
    };
    const auto tau = [&]() {
        const auto v = option("tau");
        if (!v) {
            throw ParseError("score '" + tagged.head + "' requires tau=");
        }
        return text::parse_double(*v, "tau");
    };
    const auto phi = [&]() {
        const auto v = option("phi");
        return generator_by_name(v ? *v : "square");
    };

    std::optional<ScoreSpec::Family> family;
    const auto& h = tagged.head;
    if (h == "se") {
        family = score::SquaredError{};
    } else if (h == "ae") {
        family = score::AbsoluteError{};
    } else if (h == "gpl") {
        const double t = tau();
        const auto g = option("g");
        family = score::GeneralizedPiecewiseLinear{t, g ? parse_bijection(*g) : Bijection()};
    } else if (h == "apl") {
        family = score::AsymmetricPiecewiseLinear{tau()};
    } else if (h == "expectile") {
        const double t = tau();
        family = score::Expectile{t, phi()};
    } else if (h == "bregman") {
        family = score::Bregman{phi()};
    } else if (h == "mv") {
        family = score::MeanVariance{};
    } else {
        throw ParseError("unknown score family '" + h + "'");
    }
    for (const auto& [key, value] : tagged.options) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError("score '" + h + "' has no option '" + key + "'");
        }
    }
    return ScoreSpec(std::move(*family), std::move(mode));
}

const std::vector<FamilyInfo>& score_families() {
    static const std::vector<FamilyInfo> families = {
        {"squared error", "se", "(z - y)^2"},
        {"absolute error", "ae", "|z - y|"},
        {"generalized piecewise linear", "gpl:tau=T:g=G", "(1{z >= y} - tau)(g(z) - g(y))"},
        {"asymmetric piecewise linear", "apl:tau=T", "(1{z >= y} - tau)(z - y)"},
        {"expectile", "expectile:tau=T:phi=square|exp",
         "|1{z >= y} - tau| (phi(y) - phi(z) + phi'(z)(z - y))"},
        {"bregman", "bregman:phi=square|exp", "(1/2)(phi(y) - phi(z) + phi'(z)(z - y))"},
        {"mean-variance", "mv", "x2^-2 (x1^2 - 2 x2 - 2 x1 y + y^2)"},
    };
    return families;
}

double evaluate_score(const ScoreSpec& spec, double z, double y) {
    const double yt = spec.mode().map_realization(y);
    const double aux = aux_of(spec.family(), yt);
    const double zt = spec.mode().map_prediction(z);
    double result = 0.0;
    for_each_score(spec.family(), zt, std::span<const double>(&yt, 1),
                   std::span<const double>(&aux, 1), [&](std::size_t, double v) { result = v; });
    return result;
}

double evaluate_score(const ScoreSpec& spec, MeanVarPrediction x, double y) {
    if (!spec.is_pair()) {
        throw PreconditionError("score '" + spec.to_string() + "' takes a scalar prediction");
    }
    require_positive_variance(x);
    return mean_variance_score(x, spec.mode().map_realization(y));
}

double score_derivative(const ScoreSpec& spec, double z, double y) {
    const double yt = spec.mode().map_realization(y);
    const double zt = spec.mode().map_prediction(z);
    double result = 0.0;
    for_each_derivative(spec.family(), zt, std::span<const double>(&yt, 1),
                        [&](std::size_t, double v) { result = v; });
    return result * spec.mode().prediction_slope(z);
}

double average_score(const ScoreSpec& spec, std::span<const double> z, std::span<const double> y) {
    if (z.size() != y.size()) {
        throw PreconditionError("length mismatch: " + std::to_string(z.size()) + " predictions vs " +
                                std::to_string(y.size()) + " realizations");
    }
    if (y.empty()) {
        throw PreconditionError("average_score needs at least one observation");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        try {
            acc += evaluate_score(spec, z[i], y[i]);
        } catch (const DomainError& e) {
            throw DomainError(with_index(i, e));
        }
    }
    return acc / static_cast<double>(y.size());
}

double average_score(const ScoreSpec& spec, std::span<const MeanVarPrediction> x,
                     std::span<const double> y) {
    if (x.size() != y.size()) {
        throw PreconditionError("length mismatch: " + std::to_string(x.size()) + " predictions vs " +
                                std::to_string(y.size()) + " realizations");
    }
    if (y.empty()) {
        throw PreconditionError("average_score needs at least one observation");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        try {
            acc += evaluate_score(spec, x[i], y[i]);
        } catch (const DomainError& e) {
            throw DomainError(with_index(i, e));
        }
    }
    return acc / static_cast<double>(y.size());
}

HomogeneityResult homogeneity_probe(const ScoreSpec& spec, std::span<const double> order_candidates,
                                    std::span<const double> c_grid,
                                    std::span<const std::pair<double, double>> sample) {
    for (double c : c_grid) {
        if (!(c > 0.0)) {
            throw PreconditionError("homogeneity probe uses c > 0 only");
        }
    }
    std::vector<double> base;
    for (const auto& [z, y] : sample) {
        const double s = evaluate_score(spec, z, y);
        if (s == 0.0) {
            throw PreconditionError("probe sample hits a zero of the score");
        }
        base.push_back(s);
    }
    const std::string note = "probed c > 0 only";
    for (double b : order_candidates) {
        bool fits = true;
        for (double c : c_grid) {
            const double factor = std::pow(c, b);
            for (std::size_t i = 0; i < sample.size() && fits; ++i) {
                const auto [z, y] = sample[i];
                const double scaled = evaluate_score(spec, c * z, c * y);
                const double expected = factor * base[i];
                fits = std::abs(scaled - expected) <= 1e-9 * std::abs(expected);
            }
            if (!fits) {
                break;
            }
        }
        if (fits) {
            return {b, note};
        }
    }
    return {std::nullopt, note + "; not homogeneous for any candidate order"};
}

PreparedScore::PreparedScore(ScoreSpec spec, std::span<const double> y)
    : spec_(std::move(spec)), y_(y.begin(), y.end()), yt_(y.size()), aux_(y.size()) {
    for (std::size_t i = 0; i < y_.size(); ++i) {
        try {
            yt_[i] = spec_.mode().map_realization(y_[i]);
            aux_[i] = aux_of(spec_.family(), yt_[i]);
        } catch (const DomainError& e) {
            throw DomainError(with_index(i, e));
        }
    }
}

void PreparedScore::scores(double z, std::span<double> out) const {
    const double zt = spec_.mode().map_prediction(z);
    for_each_score(spec_.family(), zt, yt_, aux_, [&](std::size_t i, double v) { out[i] = v; });
}

void PreparedScore::scores(MeanVarPrediction x, std::span<double> out) const {
    if (!spec_.is_pair()) {
        throw PreconditionError("score '" + spec_.to_string() + "' takes a scalar prediction");
    }
    require_positive_variance(x);
    for (std::size_t i = 0; i < yt_.size(); ++i) {
        out[i] = mean_variance_score(x, yt_[i]);
    }
}

void PreparedScore::derivatives(double z, std::span<double> out) const {
    const double zt = spec_.mode().map_prediction(z);
    const double slope = spec_.mode().prediction_slope(z);
    for_each_derivative(spec_.family(), zt, yt_,
                        [&](std::size_t i, double v) { out[i] = v * slope; });
}

double PreparedScore::mean(double z) const {
    const double zt = spec_.mode().map_prediction(z);
    double acc = 0.0;
    for_each_score(spec_.family(), zt, yt_, aux_, [&](std::size_t, double v) { acc += v; });
    return acc / static_cast<double>(yt_.size());
}

double PreparedScore::mean(MeanVarPrediction x) const {
    if (!spec_.is_pair()) {
        throw PreconditionError("score '" + spec_.to_string() + "' takes a scalar prediction");
    }
    require_positive_variance(x);
    double acc = 0.0;
    for (double yt : yt_) {
        acc += mean_variance_score(x, yt);
    }
    return acc / static_cast<double>(yt_.size());
}

double PreparedScore::mean(std::span<const double> z) const {
    if (z.size() != yt_.size()) {
        throw PreconditionError("length mismatch between predictions and realizations");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double zt = spec_.mode().map_prediction(z[i]);
        for_each_score(spec_.family(), zt, std::span<const double>(&yt_[i], 1),
                       std::span<const double>(&aux_[i], 1),
                       [&](std::size_t, double v) { acc += v; });
    }
    return acc / static_cast<double>(z.size());
}

double PreparedScore::mean_derivative(double z) const {
    const double zt = spec_.mode().map_prediction(z);
    double acc = 0.0;
    for_each_derivative(spec_.family(), zt, yt_, [&](std::size_t, double v) { acc += v; });
    return acc / static_cast<double>(yt_.size()) * spec_.mode().prediction_slope(z);
}

std::vector<double> PreparedScore::kinks() const {
    std::vector<double> out;
    out.reserve(y_.size());
    const auto& mode = spec_.mode();
    for (std::size_t i = 0; i < y_.size(); ++i) {
        switch (mode.kind()) {
            case TransformKind::realization:
                out.push_back(yt_[i]);
                break;
            case TransformKind::prediction:
                out.push_back(mode.g().apply(y_[i]));
                break;
            default:
                out.push_back(y_[i]);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace elicit
