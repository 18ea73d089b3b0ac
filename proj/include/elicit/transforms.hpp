#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

/// Real interval with independently open or closed endpoints (infinite ends are open).
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double t) const;
    /// True when the open interval (lo, hi) lies inside this one.
    bool covers_open(double lo_other, double hi_other) const;
    std::string to_string() const;

    static Interval real_line() { return {}; }
    static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
    static Interval closed_open(double lo, double hi) { return {lo, hi, true, false}; }
};

enum class Monotonicity { increasing, decreasing, none };

std::string_view to_string(Monotonicity m);

/// Strictly monotone transformation g with inverse and derivative, or (for
/// the single non-injective catalog entry `square`) a measurable map without
/// inverse that may only transform realizations.
class Bijection {
public:
    enum class Kind {
        identity,
        negate,
        log,
        affine_log,
        shifted_log,
        exp,
        affine_exp,
        power,
        affine_power,
        shifted_power,
        box_cox,
        square,
    };

    /// Identity transform.
    Bijection();

    const std::string& id() const { return id_; }
    const std::vector<double>& params() const { return params_; }
    Kind kind() const { return kind_; }
    const Interval& domain() const { return domain_; }
    const Interval& codomain() const { return codomain_; }
    Monotonicity monotonicity() const { return monotonicity_; }
    bool invertible() const { return monotonicity_ != Monotonicity::none; }
    bool is_identity() const { return kind_ == Kind::identity; }

    double apply(double t) const;
    double invert(double u) const;
    double deriv(double t) const;

    /// Canonical text form, e.g. `log`, `power(0.5)`, `affine-exp(2,1)`.
    std::string to_string() const;

    friend Bijection catalog(std::string_view name, std::span<const double> params);

private:
    double apply_unchecked(double t) const;

    Kind kind_ = Kind::identity;
    std::string id_ = "identity";
    std::vector<double> params_;
    double a_ = 1.0;
    double b_ = 0.0;
    double c_ = 0.0;
    Interval domain_;
    Interval codomain_;
    Monotonicity monotonicity_ = Monotonicity::increasing;
};

/// Looks up a catalog row by name. Parameter conventions:
/// `affine-log` log(a t + b) [a,b]; `shifted-log` log(t + b) [b];
/// `affine-exp` exp(a t + b) [a,b]; `power` t^a [a];
/// `affine-power` (b t + c)^a [a,b,c]; `shifted-power` (t + c)^a [a,c];
/// `box-cox` (t^a - 1)/a, log at a = 0 [a].
Bijection catalog(std::string_view name, std::span<const double> params = {});

/// Parses `name` or `name(p1,p2,...)`.
Bijection parse_bijection(std::string_view text);

/// One row of the transform catalog listing.
struct CatalogRow {
    std::string name;
    std::string params;
    std::string constraint;
    std::string formula;
    std::string inverse;
    std::string domain;
    std::string functional;
};

const std::vector<CatalogRow>& catalog_rows();

/// max over the grid of |invert(apply(t)) - t| / max(1, |t|).
double roundtrip_check(const Bijection& g, std::span<const double> grid);

/// How a transform enters a scoring or identification function.
enum class TransformKind { none, realization, prediction, both };

std::string_view to_string(TransformKind k);

/// S(z, y), S(z, g(y)), S(g^{-1}(z), y) or S(g(z), g(y)).
class TransformMode {
public:
    TransformMode() = default;

    static TransformMode none() { return {}; }
    static TransformMode realization(Bijection g);
    static TransformMode prediction(Bijection g);
    static TransformMode both(Bijection g);

    TransformKind kind() const { return kind_; }
    /// The transform; identity when kind() == none.
    const Bijection& g() const { return g_; }

    /// Prediction value fed to the untransformed function.
    double map_prediction(double z) const;
    /// d map_prediction / dz.
    double prediction_slope(double z) const;
    /// Realization value fed to the untransformed function.
    double map_realization(double y) const;
    /// Values of z accepted by map_prediction.
    Interval prediction_domain() const;
    /// +1 when map_prediction is increasing, -1 when decreasing.
    int prediction_orientation() const;

    /// `` for none, otherwise `@both:log` style suffix.
    std::string suffix() const;

private:
    TransformMode(TransformKind kind, Bijection g);

    TransformKind kind_ = TransformKind::none;
    Bijection g_;
};

/// Parses the part after `@`, e.g. `both:log` or `realization:power(2)`.
TransformMode parse_transform_mode(std::string_view text);

}  // namespace elicit
