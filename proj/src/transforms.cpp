#include "elicit/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elicit/error.hpp"
#include "elicit/text.hpp"

namespace elicit {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void expect_params(std::string_view name, std::span<const double> params, std::size_t count,
                   std::string_view layout) {
    if (params.size() != count) {
        std::ostringstream msg;
        msg << "transform '" << name << "' takes " << count << " parameter(s) " << layout << ", got "
            << params.size();
        throw ParameterError(msg.str());
    }
    for (double p : params) {
        if (!std::isfinite(p)) {
            throw ParameterError("transform '" + std::string(name) + "' requires finite parameters");
        }
    }
}

[[noreturn]] void constraint_violated(std::string_view name, std::string_view constraint) {
    throw ParameterError("transform '" + std::string(name) + "' violates row constraint " +
                         std::string(constraint));
}

std::string fmt_bound(double v) {
    if (v == inf) {
        return "inf";
    }
    if (v == -inf) {
        return "-inf";
    }
    return text::format_double(v);
}

}  // namespace

bool Interval::contains(double t) const {
    if (std::isnan(t)) {
        return false;
    }
    const bool above = lo_closed ? t >= lo : t > lo;
    const bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
}

bool Interval::covers_open(double lo_other, double hi_other) const {
    return lo <= lo_other && hi_other <= hi;
}

std::string Interval::to_string() const {
    return std::string(lo_closed ? "[" : "(") + fmt_bound(lo) + ", " + fmt_bound(hi) +
           (hi_closed ? "]" : ")");
}

std::string_view to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::increasing:
            return "increasing";
        case Monotonicity::decreasing:
            return "decreasing";
        case Monotonicity::none:
            break;
    }
    return "none";
}

Bijection::Bijection() = default;

Bijection catalog(std::string_view name, std::span<const double> params) {
    using Kind = Bijection::Kind;
    Bijection g;
    g.id_ = std::string(name);
    g.params_.assign(params.begin(), params.end());

    if (name == "identity") {
        expect_params(name, params, 0, "[]");
        g.kind_ = Kind::identity;
    } else if (name == "negate") {
        expect_params(name, params, 0, "[]");
        g.kind_ = Kind::negate;
        g.monotonicity_ = Monotonicity::decreasing;
    } else if (name == "log") {
        expect_params(name, params, 0, "[]");
        g.kind_ = Kind::log;
        g.domain_ = Interval::open(0.0, inf);
    } else if (name == "affine-log") {
        expect_params(name, params, 2, "[a,b]");
        g.a_ = params[0];
        g.b_ = params[1];
        if (!(g.a_ > 0.0)) {
            constraint_violated(name, "a > 0");
        }
        g.kind_ = Kind::affine_log;
        g.domain_ = Interval::open(-g.b_ / g.a_, inf);
    } else if (name == "shifted-log") {
        expect_params(name, params, 1, "[b]");
        g.b_ = params[0];
        g.kind_ = Kind::shifted_log;
        g.domain_ = Interval::open(-g.b_, inf);
    } else if (name == "exp") {
        expect_params(name, params, 0, "[]");
        g.kind_ = Kind::exp;
        g.codomain_ = Interval::open(0.0, inf);
    } else if (name == "affine-exp") {
        expect_params(name, params, 2, "[a,b]");
        g.a_ = params[0];
        g.b_ = params[1];
        if (g.a_ == 0.0) {
            constraint_violated(name, "a != 0");
        }
        g.kind_ = Kind::affine_exp;
        g.codomain_ = Interval::open(0.0, inf);
        g.monotonicity_ = g.a_ > 0.0 ? Monotonicity::increasing : Monotonicity::decreasing;
    } else if (name == "power") {
        expect_params(name, params, 1, "[a]");
        g.a_ = params[0];
        if (g.a_ == 0.0) {
            constraint_violated(name, "a != 0");
        }
        g.kind_ = Kind::power;
        if (g.a_ > 0.0) {
            g.domain_ = Interval::closed_open(0.0, inf);
            g.codomain_ = Interval::closed_open(0.0, inf);
        } else {
            g.domain_ = Interval::open(0.0, inf);
            g.codomain_ = Interval::open(0.0, inf);
            g.monotonicity_ = Monotonicity::decreasing;
        }
    } else if (name == "affine-power") {
        expect_params(name, params, 3, "[a,b,c]");
        g.a_ = params[0];
        g.b_ = params[1];
        g.c_ = params[2];
        if (g.a_ == 0.0) {
            constraint_violated(name, "a != 0");
        }
        if (!(g.b_ > 0.0)) {
            constraint_violated(name, "b > 0");
        }
        g.kind_ = Kind::affine_power;
        if (g.a_ > 0.0) {
            g.domain_ = Interval::closed_open(-g.c_ / g.b_, inf);
            g.codomain_ = Interval::closed_open(0.0, inf);
        } else {
            g.domain_ = Interval::open(-g.c_ / g.b_, inf);
            g.codomain_ = Interval::open(0.0, inf);
            g.monotonicity_ = Monotonicity::decreasing;
        }
    } else if (name == "shifted-power") {
        expect_params(name, params, 2, "[a,c]");
        g.a_ = params[0];
        g.c_ = params[1];
        if (g.a_ == 0.0) {
            constraint_violated(name, "a != 0");
        }
        g.kind_ = Kind::shifted_power;
        g.domain_ = Interval::open(-g.c_, inf);
        g.codomain_ = Interval::open(0.0, inf);
        g.monotonicity_ = g.a_ > 0.0 ? Monotonicity::increasing : Monotonicity::decreasing;
    } else if (name == "box-cox") {
        expect_params(name, params, 1, "[a]");
        g.a_ = params[0];
        g.kind_ = Kind::box_cox;
        g.domain_ = Interval::open(0.0, inf);
        if (g.a_ > 0.0) {
            g.codomain_ = Interval::open(-1.0 / g.a_, inf);
        } else if (g.a_ < 0.0) {
            g.codomain_ = Interval::open(-inf, -1.0 / g.a_);
        }
    } else if (name == "square") {
        expect_params(name, params, 0, "[]");
        g.kind_ = Kind::square;
        g.codomain_ = Interval::closed_open(0.0, inf);
        g.monotonicity_ = Monotonicity::none;
    } else {
        throw ParameterError("unknown transform '" + std::string(name) + "'");
    }
    return g;
}

Bijection parse_bijection(std::string_view text) {
    const auto call = text::parse_call(text);
    return catalog(call.name, call.args);
}

double Bijection::apply_unchecked(double t) const {
    switch (kind_) {
        case Kind::identity:
            return t;
        case Kind::negate:
            return -t;
        case Kind::log:
            return std::log(t);
        case Kind::affine_log:
            return std::log(a_ * t + b_);
        case Kind::shifted_log:
            return std::log(t + b_);
        case Kind::exp:
            return std::exp(t);
        case Kind::affine_exp:
            return std::exp(a_ * t + b_);
        case Kind::power:
            return std::pow(t, a_);
        case Kind::affine_power:
            return std::pow(b_ * t + c_, a_);
        case Kind::shifted_power:
            return std::pow(t + c_, a_);
        case Kind::box_cox:
            return a_ == 0.0 ? std::log(t) : (std::pow(t, a_) - 1.0) / a_;
        case Kind::square:
            return t * t;
    }
    return t;
}

double Bijection::apply(double t) const {
    if (!domain_.contains(t)) {
        std::ostringstream msg;
        msg << "transform " << to_string() << ": argument " << t << " outside domain "
            << domain_.to_string();
        throw DomainError(msg.str());
    }
    return apply_unchecked(t);
}

double Bijection::invert(double u) const {
    if (!invertible()) {
        throw PreconditionError("transform " + to_string() + " has no inverse");
    }
    if (!codomain_.contains(u)) {
        std::ostringstream msg;
        msg << "transform " << to_string() << ": inverse argument " << u << " outside codomain "
            << codomain_.to_string();
        throw DomainError(msg.str());
    }
    switch (kind_) {
        case Kind::identity:
            return u;
        case Kind::negate:
            return -u;
        case Kind::log:
            return std::exp(u);
        case Kind::affine_log:
            return (std::exp(u) - b_) / a_;
        case Kind::shifted_log:
            return std::exp(u) - b_;
        case Kind::exp:
            return std::log(u);
        case Kind::affine_exp:
            return (std::log(u) - b_) / a_;
        case Kind::power:
            return std::pow(u, 1.0 / a_);
        case Kind::affine_power:
            return (std::pow(u, 1.0 / a_) - c_) / b_;
        case Kind::shifted_power:
            return std::pow(u, 1.0 / a_) - c_;
        case Kind::box_cox:
            return a_ == 0.0 ? std::exp(u) : std::pow(a_ * u + 1.0, 1.0 / a_);
        case Kind::square:
            break;
    }
    return u;
}

double Bijection::deriv(double t) const {
    if (!domain_.contains(t)) {
        std::ostringstream msg;
        msg << "transform " << to_string() << ": argument " << t << " outside domain "
            << domain_.to_string();
        throw DomainError(msg.str());
    }
    double d = 1.0;
    switch (kind_) {
        case Kind::identity:
            d = 1.0;
            break;
        case Kind::negate:
            d = -1.0;
            break;
        case Kind::log:
            d = 1.0 / t;
            break;
        case Kind::affine_log:
            d = a_ / (a_ * t + b_);
            break;
        case Kind::shifted_log:
            d = 1.0 / (t + b_);
            break;
        case Kind::exp:
            d = std::exp(t);
            break;
        case Kind::affine_exp:
            d = a_ * std::exp(a_ * t + b_);
            break;
        case Kind::power:
            d = a_ * std::pow(t, a_ - 1.0);
            break;
        case Kind::affine_power:
            d = a_ * b_ * std::pow(b_ * t + c_, a_ - 1.0);
            break;
        case Kind::shifted_power:
            d = a_ * std::pow(t + c_, a_ - 1.0);
            break;
        case Kind::box_cox:
            d = std::pow(t, a_ - 1.0);
            break;
        case Kind::square:
            d = 2.0 * t;
            break;
    }
    if (!std::isfinite(d)) {
        std::ostringstream msg;
        msg << "transform " << to_string() << ": derivative is singular at " << t;
        throw DomainError(msg.str());
    }
    return d;
}

std::string Bijection::to_string() const {
    if (params_.empty()) {
        return id_;
    }
    std::string out = id_ + "(";
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i > 0) {
            out += ",";
        }
        out += text::format_double(params_[i]);
    }
    return out + ")";
}

const std::vector<CatalogRow>& catalog_rows() {
    static const std::vector<CatalogRow> rows = {
        {"identity", "", "", "t", "t", "R", "𝔼_F[y]"},
        {"negate", "", "", "-t", "-t", "R", "𝔼_F[y]"},
        {"log", "", "", "log(t)", "exp(t)", "(0, inf)", "exp(𝔼_F[log y])"},
        {"affine-log", "a,b", "a > 0", "log(a t + b)", "(exp(t) - b)/a", "(-b/a, inf)",
         "(exp(𝔼_F[log(a y + b)]) - b)/a"},
        {"shifted-log", "b", "", "log(t + b)", "exp(t) - b", "(-b, inf)",
         "exp(𝔼_F[log(y + b)]) - b"},
        {"exp", "", "", "exp(t)", "log(t)", "R", "log(𝔼_F[exp(y)])"},
        {"affine-exp", "a,b", "a != 0", "exp(a t + b)", "(log(t) - b)/a", "R",
         "(log(𝔼_F[exp(a y + b)]) - b)/a"},
        {"power", "a", "a > 0", "t^a", "t^(1/a)", "[0, inf)", "(𝔼_F[yᵃ])^{1/a}"},
        {"power", "a", "a != 0", "t^a", "t^(1/a)", "(0, inf)", "(𝔼_F[yᵃ])^{1/a}"},
        {"affine-power", "a,b,c", "a > 0, b > 0", "(b t + c)^a", "(t^(1/a) - c)/b", "[-c/b, inf)",
         "((𝔼_F[(b y + c)ᵃ])^{1/a} - c)/b"},
        {"affine-power", "a,b,c", "a != 0, b > 0", "(b t + c)^a", "(t^(1/a) - c)/b",
         "(-c/b, inf)", "((𝔼_F[(b y + c)ᵃ])^{1/a} - c)/b"},
        {"shifted-power", "a,c", "a != 0", "(t + c)^a", "t^(1/a) - c", "(-c, inf)",
         "(𝔼_F[(y + c)ᵃ])^{1/a} - c"},
        {"box-cox", "a", "", "(t^a - 1)/a; log(t) at a = 0", "(a t + 1)^(1/a); exp(t) at a = 0",
         "(0, inf)", "(𝔼_F[yᵃ])^{1/a} / exp(𝔼_F[log y])"},
        {"square", "", "realization-only (not invertible)", "t^2", "-", "R", "𝔼_F[y²]"},
    };
    return rows;
}

double roundtrip_check(const Bijection& g, std::span<const double> grid) {
    double worst = 0.0;
    for (double t : grid) {
        const double back = g.invert(g.apply(t));
        worst = std::max(worst, std::abs(back - t) / std::max(1.0, std::abs(t)));
    }
    return worst;
}

std::string_view to_string(TransformKind k) {
    switch (k) {
        case TransformKind::none:
            return "none";
        case TransformKind::realization:
            return "realization";
        case TransformKind::prediction:
            return "prediction";
        case TransformKind::both:
            return "both";
    }
    return "none";
}

TransformMode::TransformMode(TransformKind kind, Bijection g) : kind_(kind), g_(std::move(g)) {
    if ((kind_ == TransformKind::prediction || kind_ == TransformKind::both) && !g_.invertible()) {
        throw ParameterError("transform mode '" + std::string(elicit::to_string(kind_)) +
                             "' requires an invertible transform, got " + g_.to_string());
    }
}

TransformMode TransformMode::realization(Bijection g) {
    return {TransformKind::realization, std::move(g)};
}

TransformMode TransformMode::prediction(Bijection g) {
    return {TransformKind::prediction, std::move(g)};
}

TransformMode TransformMode::both(Bijection g) { return {TransformKind::both, std::move(g)}; }

double TransformMode::map_prediction(double z) const {
    switch (kind_) {
        case TransformKind::prediction:
            return g_.invert(z);
        case TransformKind::both:
            return g_.apply(z);
        default:
            return z;
    }
}

double TransformMode::prediction_slope(double z) const {
    switch (kind_) {
        case TransformKind::prediction:
            return 1.0 / g_.deriv(g_.invert(z));
        case TransformKind::both:
            return g_.deriv(z);
        default:
            return 1.0;
    }
}

double TransformMode::map_realization(double y) const {
    switch (kind_) {
        case TransformKind::realization:
        case TransformKind::both:
            return g_.apply(y);
        default:
            return y;
    }
}

Interval TransformMode::prediction_domain() const {
    switch (kind_) {
        case TransformKind::prediction:
            return g_.codomain();
        case TransformKind::both:
            return g_.domain();
        default:
            return Interval::real_line();
    }
}

int TransformMode::prediction_orientation() const {
    if ((kind_ == TransformKind::prediction || kind_ == TransformKind::both) &&
        g_.monotonicity() == Monotonicity::decreasing) {
        return -1;
    }
    return 1;
}

std::string TransformMode::suffix() const {
    if (kind_ == TransformKind::none) {
        return "";
    }
    return "@" + std::string(elicit::to_string(kind_)) + ":" + g_.to_string();
}

TransformMode parse_transform_mode(std::string_view text) {
    text = text::trim(text);
    const auto colon = text.find(':');
    const auto kind = text::trim(text.substr(0, colon));
    if (kind == "none") {
        if (colon != std::string_view::npos) {
            throw ParseError("mode 'none' takes no transform");
        }
        return TransformMode::none();
    }
    if (colon == std::string_view::npos) {
        throw ParseError("transform mode '" + std::string(kind) + "' needs ':<transform>'");
    }
    auto g = parse_bijection(text.substr(colon + 1));
    if (kind == "realization") {
        return TransformMode::realization(std::move(g));
    }
    if (kind == "prediction") {
        return TransformMode::prediction(std::move(g));
    }
    if (kind == "both") {
        return TransformMode::both(std::move(g));
    }
    throw ParseError("unknown transform mode '" + std::string(kind) + "'");
}

}  // namespace elicit
