#include "elicit/identification.hpp"

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

double indicator(double z, double y) { return z >= y ? 1.0 : 0.0; }

double scalar_identification(const IdentSpec::Family& family, double zt, double yt) {
    return std::visit(overloaded{
                          [&](const ident::Mean&) { return zt - yt; },
                          [&](const ident::Quantile& q) { return indicator(zt, yt) - q.tau; },
                          [&](const ident::Expectile& e) {
                              return 2.0 * std::abs(indicator(zt, yt) - e.tau) * (zt - yt);
                          },
                          [](const ident::MeanVariance&) -> double {
                              throw PreconditionError(
                                  "mean-variance identification needs a (mean, variance) prediction");
                          },
                      },
                      family);
}

std::array<double, 2> pair_identification(MeanVarPrediction x, double yt) {
    return {x.mean - yt, x.variance + x.mean * x.mean - yt * yt};
}

bool same_transform(const Bijection& a, const Bijection& b) {
    return a.id() == b.id() && a.params() == b.params();
}

}  // namespace

IdentSpec::IdentSpec(Family family, TransformMode mode)
    : family_(std::move(family)), mode_(std::move(mode)) {
    std::visit(overloaded{
                   [](const ident::Quantile& q) {
                       if (!(q.tau > 0.0 && q.tau < 1.0)) {
                           throw ParameterError("quantile identification requires tau in (0,1)");
                       }
                   },
                   [](const ident::Expectile& e) {
                       if (!(e.tau > 0.0 && e.tau < 1.0)) {
                           throw ParameterError("expectile identification requires tau in (0,1)");
                       }
                   },
                   [](const auto&) {},
               },
               family_);
    if (is_pair() && mode_.kind() != TransformKind::none &&
        mode_.kind() != TransformKind::realization) {
        throw ParameterError("mean-variance identification admits only modes none and realization");
    }
}

std::string IdentSpec::to_string() const {
    const auto f = [](double x) { return text::format_double(x); };
    const std::string head =
        std::visit(overloaded{
                       [](const ident::Mean&) { return std::string("mean"); },
                       [&](const ident::Quantile& q) { return "quantile:tau=" + f(q.tau); },
                       [&](const ident::Expectile& e) { return "expectile:tau=" + f(e.tau); },
                       [](const ident::MeanVariance&) { return std::string("mv"); },
                   },
                   family_);
    return head + mode_.suffix();
}

IdentSpec parse_ident_spec(std::string_view text) {
    const auto at = text.find('@');
    const auto tagged = text::parse_tagged(text.substr(0, at));
    TransformMode mode;
    if (at != std::string_view::npos) {
        mode = parse_transform_mode(text.substr(at + 1));
    }
    const auto tau = [&]() {
        const auto it = tagged.options.find("tau");
        if (it == tagged.options.end()) {
            throw ParseError("identification '" + tagged.head + "' requires tau=");
        }
        return text::parse_double(it->second, "tau");
    };
    const auto no_options_beyond = [&](std::size_t allowed) {
        if (tagged.options.size() > allowed) {
            throw ParseError("unexpected option in identification spec '" + std::string(text) + "'");
        }
    };
    if (tagged.head == "mean") {
        no_options_beyond(0);
        return IdentSpec(ident::Mean{}, std::move(mode));
    }
    if (tagged.head == "quantile") {
        no_options_beyond(1);
        return IdentSpec(ident::Quantile{tau()}, std::move(mode));
    }
    if (tagged.head == "expectile") {
        no_options_beyond(1);
        return IdentSpec(ident::Expectile{tau()}, std::move(mode));
    }
    if (tagged.head == "mv") {
        no_options_beyond(0);
        return IdentSpec(ident::MeanVariance{}, std::move(mode));
    }
    throw ParseError("unknown identification family '" + tagged.head + "'");
}

const std::vector<IdentFamilyInfo>& ident_families() {
    static const std::vector<IdentFamilyInfo> families = {
        {"mean", "mean", "z - y"},
        {"quantile", "quantile:tau=T", "1{z >= y} - tau"},
        {"expectile", "expectile:tau=T", "2 |1{z >= y} - tau| (z - y)"},
        {"mean-variance", "mv", "(x1 - y, x2 + x1^2 - y^2)"},
    };
    return families;
}

double evaluate_identification(const IdentSpec& spec, double z, double y) {
    return scalar_identification(spec.family(), spec.mode().map_prediction(z),
                                 spec.mode().map_realization(y));
}

std::array<double, 2> evaluate_identification(const IdentSpec& spec, MeanVarPrediction x, double y) {
    if (!spec.is_pair()) {
        throw PreconditionError("identification '" + spec.to_string() + "' takes a scalar prediction");
    }
    return pair_identification(x, spec.mode().map_realization(y));
}

PreparedIdentification::PreparedIdentification(IdentSpec spec, std::span<const double> y)
    : spec_(std::move(spec)), yt_(y.size()) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        try {
            yt_[i] = spec_.mode().map_realization(y[i]);
        } catch (const DomainError& e) {
            throw DomainError("at draw " + std::to_string(i) + ": " + e.what());
        }
    }
}

McEstimate PreparedIdentification::mean(double z) const {
    const double zt = spec_.mode().map_prediction(z);
    std::vector<double> values(yt_.size());
    for (std::size_t i = 0; i < yt_.size(); ++i) {
        values[i] = scalar_identification(spec_.family(), zt, yt_[i]);
    }
    return summarize(values);
}

std::array<McEstimate, 2> PreparedIdentification::mean(MeanVarPrediction x) const {
    if (!spec_.is_pair()) {
        throw PreconditionError("identification '" + spec_.to_string() + "' takes a scalar prediction");
    }
    std::vector<double> first(yt_.size());
    std::vector<double> second(yt_.size());
    for (std::size_t i = 0; i < yt_.size(); ++i) {
        const auto v = pair_identification(x, yt_[i]);
        first[i] = v[0];
        second[i] = v[1];
    }
    return {summarize(first), summarize(second)};
}

OrientationReport orientation_probe(const IdentSpec& spec, const DistributionSpec& d,
                                    double functional_value, std::span<const double> offsets,
                                    std::size_t n, Seed seed) {
    if (spec.is_pair()) {
        throw PreconditionError("orientation is defined for scalar identification functions only");
    }
    const auto draws = sample_iid(d, n, seed);
    const PreparedIdentification prepared(spec, draws);
    OrientationReport report;
    report.expected_orientation = spec.orientation();
    for (double offset : offsets) {
        if (offset == 0.0) {
            throw PreconditionError("orientation offsets must be non-zero");
        }
        const auto est = prepared.mean(functional_value + offset);
        const double expected_sign = offset > 0.0 ? report.expected_orientation
                                                  : -report.expected_orientation;
        const bool ok = est.value * expected_sign > 0.0 && std::abs(est.value) > 3.0 * est.std_error;
        report.pass = report.pass && ok;
        report.probes.push_back({offset, est, ok});
    }
    return report;
}

std::optional<OsbandWeight> builtin_osband_weight(const ScoreSpec& score, const IdentSpec& ident) {
    const auto& sm = score.mode();
    const auto& im = ident.mode();
    const bool modes_match = sm.kind() == im.kind() && same_transform(sm.g(), im.g());
    if (!modes_match) {
        return std::nullopt;
    }
    const auto half_curvature = [](const ConvexGenerator& phi) -> std::optional<OsbandWeight> {
        if (!phi.curvature) {
            return std::nullopt;
        }
        auto curv = *phi.curvature;
        return OsbandWeight([curv](double z) { return 0.5 * curv(z); });
    };
    const auto& sf = score.family();
    const auto& vf = ident.family();

    if (std::holds_alternative<score::SquaredError>(sf) && std::holds_alternative<ident::Mean>(vf)) {
        if (sm.kind() == TransformKind::none) {
            return OsbandWeight([](double) { return 2.0; });
        }
        if (sm.kind() == TransformKind::both) {
            const Bijection g = sm.g();
            return OsbandWeight([g](double z) { return 2.0 * g.deriv(z); });
        }
        return std::nullopt;
    }
    if (sm.kind() != TransformKind::none) {
        return std::nullopt;
    }
    if (const auto* b = std::get_if<score::Bregman>(&sf); b && std::holds_alternative<ident::Mean>(vf)) {
        return half_curvature(b->phi);
    }
    if (const auto* q = std::get_if<ident::Quantile>(&vf)) {
        if (const auto* s = std::get_if<score::GeneralizedPiecewiseLinear>(&sf); s && s->tau == q->tau) {
            const Bijection g = s->inner;
            return OsbandWeight([g](double z) { return g.deriv(z); });
        }
        if (const auto* s = std::get_if<score::AsymmetricPiecewiseLinear>(&sf); s && s->tau == q->tau) {
            return OsbandWeight([](double) { return 1.0; });
        }
        if (std::holds_alternative<score::AbsoluteError>(sf) && q->tau == 0.5) {
            return OsbandWeight([](double) { return 2.0; });
        }
        return std::nullopt;
    }
    if (const auto* e = std::get_if<ident::Expectile>(&vf)) {
        if (const auto* s = std::get_if<score::Expectile>(&sf); s && s->tau == e->tau) {
            return half_curvature(s->phi);
        }
    }
    return std::nullopt;
}

OsbandResult osband_residual(const ScoreSpec& score, const IdentSpec& ident, const OsbandWeight& h,
                             std::span<const std::pair<double, double>> points, double step) {
    if (score.is_pair() || ident.is_pair()) {
        throw PreconditionError("osband residual is defined for scalar predictions");
    }
    if (!h) {
        return {false, 0.0, "no weight function h for this pairing"};
    }
    OsbandResult result;
    for (const auto& [z, y] : points) {
        if (std::abs(z - y) < 1e-6 * std::max(1.0, std::abs(y))) {
            std::ostringstream msg;
            msg << "point (z=" << z << ", y=" << y << ") lies in the kink exclusion zone";
            throw PreconditionError(msg.str());
        }
        const double h_step = step > 0.0 ? step : default_step(z);
        const double slope =
            central_diff([&](double t) { return evaluate_score(score, t, y); }, z, h_step);
        const double rhs = h(z) * evaluate_identification(ident, z, y);
        result.max_residual = std::max(result.max_residual, std::abs(slope - rhs));
    }
    return result;
}

}  // namespace elicit
