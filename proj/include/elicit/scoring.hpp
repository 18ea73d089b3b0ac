#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elicit/numerics.hpp"
#include "elicit/transforms.hpp"

namespace elicit {

/// Convex function phi with subgradient phi' and optional phi''.
struct ConvexGenerator {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> slope;
    std::optional<std::function<double(double)>> curvature;
    bool strictly_convex = true;
};

/// phi(t) = t^2.
ConvexGenerator square_generator();
/// phi(t) = exp(t).
ConvexGenerator exp_generator();
/// Built-in generator by name: `square`, `exp`.
ConvexGenerator generator_by_name(std::string_view name);

namespace score {
/// (z - y)^2.
struct SquaredError {};
/// |z - y|.
struct AbsoluteError {};
/// (1{z >= y} - tau)(g(z) - g(y)) with nondecreasing g.
struct GeneralizedPiecewiseLinear {
    double tau;
    Bijection inner;
};
/// (1{z >= y} - tau)(z - y).
struct AsymmetricPiecewiseLinear {
    double tau;
};
/// |1{z >= y} - tau| (phi(y) - phi(z) + phi'(z)(z - y)).
struct Expectile {
    double tau;
    ConvexGenerator phi;
};
/// (1/2)(phi(y) - phi(z) + phi'(z)(z - y)).
struct Bregman {
    ConvexGenerator phi;
};
/// x2^{-2} (x1^2 - 2 x2 - 2 x1 y + y^2) for the (mean, variance) pair.
struct MeanVariance {};
}  // namespace score

/// Prediction of the (mean, variance) pair; variance must be positive.
struct MeanVarPrediction {
    double mean;
    double variance;
};

/// A scoring-function family composed with a transform mode.
class ScoreSpec {
public:
    using Family =
        std::variant<score::SquaredError, score::AbsoluteError, score::GeneralizedPiecewiseLinear,
                     score::AsymmetricPiecewiseLinear, score::Expectile, score::Bregman,
                     score::MeanVariance>;

    ScoreSpec(Family family, TransformMode mode = {});

    const Family& family() const { return family_; }
    const TransformMode& mode() const { return mode_; }
    bool is_pair() const { return std::holds_alternative<score::MeanVariance>(family_); }
    /// Families whose score has kinks at z = y (indicator-based or absolute error).
    bool is_piecewise() const;
    /// Families whose minimum over z is zero for every y.
    bool has_zero_optimum() const;
    std::string_view family_name() const;

    /// Prediction values for which the score is defined.
    Interval prediction_domain() const;

    /// Same family with another transform mode.
    ScoreSpec with_mode(TransformMode mode) const { return {family_, std::move(mode)}; }

    /// e.g. `se@both:log`, `gpl:tau=0.9:g=log`, `expectile:tau=0.75:phi=square@both:power(0.5)`.
    std::string to_string() const;

private:
    Family family_;
    TransformMode mode_;
};

ScoreSpec parse_score_spec(std::string_view text);

/// Family names with their encodings, for catalog listings.
struct FamilyInfo {
    std::string name;
    std::string encoding;
    std::string formula;
};
const std::vector<FamilyInfo>& score_families();

double evaluate_score(const ScoreSpec& spec, double z, double y);
double evaluate_score(const ScoreSpec& spec, MeanVarPrediction x, double y);

/// Right derivative of S(z, y) in z (subgradient at kinks). Needs phi'' for
/// Expectile and Bregman families.
double score_derivative(const ScoreSpec& spec, double z, double y);

/// Realized average score (1/n) sum S(z_i, y_i); domain errors name the index.
double average_score(const ScoreSpec& spec, std::span<const double> z, std::span<const double> y);
double average_score(const ScoreSpec& spec, std::span<const MeanVarPrediction> x,
                     std::span<const double> y);

struct HomogeneityResult {
    std::optional<double> order;  ///< b, or nullopt when no candidate fits
    std::string note;
};

/// Tests S(cz, cy) = c^b S(z, y) for each candidate b over c_grid (c > 0 only).
HomogeneityResult homogeneity_probe(const ScoreSpec& spec, std::span<const double> order_candidates,
                                    std::span<const double> c_grid,
                                    std::span<const std::pair<double, double>> sample);

/// A score bound to a fixed set of realizations, with the realization-side
/// transforms applied once. Used for empirical expected-score curves and
/// M-estimation objectives.
class PreparedScore {
public:
    PreparedScore(ScoreSpec spec, std::span<const double> y);

    const ScoreSpec& spec() const { return spec_; }
    std::size_t size() const { return yt_.size(); }

    /// Per-realization scores S(z, y_i) into `out` (size() entries).
    void scores(double z, std::span<double> out) const;
    void scores(MeanVarPrediction x, std::span<double> out) const;
    /// Per-realization right derivatives in z.
    void derivatives(double z, std::span<double> out) const;

    double mean(double z) const;
    double mean(MeanVarPrediction x) const;
    /// Average of S(z_i, y_i) for per-observation predictions.
    double mean(std::span<const double> z) const;
    double mean_derivative(double z) const;

    /// Realizations mapped into prediction space; the kinks of piecewise families.
    std::vector<double> kinks() const;

private:
    ScoreSpec spec_;
    std::vector<double> y_;
    std::vector<double> yt_;   // mode-transformed realizations
    std::vector<double> aux_;  // phi(yt) or inner g(yt), family dependent
};

}  // namespace elicit
