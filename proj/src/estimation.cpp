#include "elicit/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "elicit/error.hpp"
#include "elicit/simplex.hpp"

namespace elicit {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

/// Observation mapped to prediction units: g(y) when the prediction or the
/// realization carries g, y otherwise.
std::vector<double> prediction_units(const ScoreSpec& score, std::span<const double> y) {
    const auto& mode = score.mode();
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        try {
            switch (mode.kind()) {
                case TransformKind::realization:
                case TransformKind::prediction:
                    out[i] = mode.g().apply(y[i]);
                    break;
                default:
                    if (mode.kind() == TransformKind::both) {
                        mode.g().apply(y[i]);  // domain check
                    }
                    out[i] = y[i];
            }
        } catch (const DomainError& e) {
            throw DomainError("observation " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

/// Moves an endpoint that left the prediction domain back inside, halfway
/// between the domain boundary and the data.
double pull_inside(double boundary, double data) {
    return std::isfinite(boundary) ? 0.5 * (boundary + data) : data;
}

FitResult fit_constant(const ScoreSpec& score, std::span<const double> y, double tol) {
    const PreparedScore prepared(score, y);
    const auto kinks = prepared.kinks();
    const double kmin = kinks.front();
    const double kmax = kinks.back();
    std::size_t evaluations = 0;
    const auto objective = [&](double z) {
        ++evaluations;
        return prepared.mean(z);
    };
    if (kmin == kmax) {
        return {Eigen::VectorXd::Constant(1, kmin), objective(kmin), evaluations, true};
    }
    const double pad = 0.01 * (kmax - kmin);
    const auto domain = score.prediction_domain();
    double lo = kmin - pad;
    double hi = kmax + pad;
    if (!domain.contains(lo)) {
        lo = pull_inside(domain.lo, kmin);
    }
    if (!domain.contains(hi)) {
        hi = pull_inside(domain.hi, kmax);
    }
    const double step = tol * std::max({1.0, std::abs(lo), std::abs(hi)});
    double z = minimize1d(objective, Bracket(lo, hi), step);
    double best = objective(z);

    if (score.is_piecewise()) {
        // The empirical objective is piecewise monotone between data points,
        // so its minimum is attained at a kink next to the search result.
        const auto it = std::lower_bound(kinks.begin(), kinks.end(), z);
        for (auto k = it == kinks.begin() ? it : std::prev(it); k != kinks.end() && k <= it; ++k) {
            const double v = objective(*k);
            if (v <= best) {
                best = v;
                z = *k;
            }
        }
    } else {
        // Smooth families: refine to the sign change of the average derivative.
        const auto slope = [&](double t) { return prepared.mean_derivative(t); };
        const double s_lo = slope(lo);
        const double s_hi = slope(hi);
        if (s_lo < 0.0 && s_hi > 0.0) {
            const double root = root1d(slope, Bracket(lo, hi), std::numeric_limits<double>::denorm_min());
            const double v = objective(root);
            // Near the minimum the objective is flat to rounding, so the
            // derivative root wins ties within a few ulps.
            const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(best);
            if (v <= best + slack) {
                best = v;
                z = root;
            }
        }
    }
    return {Eigen::VectorXd::Constant(1, z), best, evaluations, true};
}

FitResult fit_linear(const ScoreSpec& score, std::span<const double> x, std::span<const double> y,
                     const std::optional<Eigen::VectorXd>& init, double tol) {
    if (x.size() != y.size()) {
        throw PreconditionError("linear model needs one covariate per observation (" +
                                std::to_string(x.size()) + " x vs " + std::to_string(y.size()) +
                                " y)");
    }
    const PreparedScore prepared(score, y);
    Eigen::VectorXd start(2);
    if (init) {
        if (init->size() != 2) {
            throw PreconditionError("linear model init needs 2 parameters");
        }
        start = *init;
    } else {
        const auto target = prediction_units(score, y);
        const auto n = static_cast<Eigen::Index>(y.size());
        Eigen::MatrixXd design(n, 2);
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            design(i, 0) = 1.0;
            design(i, 1) = x[static_cast<std::size_t>(i)];
            rhs(i) = target[static_cast<std::size_t>(i)];
        }
        start = design.colPivHouseholderQr().solve(rhs);
    }
    std::vector<double> z(y.size());
    const auto objective = [&](const Eigen::VectorXd& theta) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = theta[0] + theta[1] * x[i];
        }
        try {
            return prepared.mean(z);
        } catch (const DomainError&) {
            return inf;
        }
    };
    if (!std::isfinite(objective(start))) {
        throw DomainError("linear model start lies outside the score's prediction domain");
    }
    SimplexOptions opt;
    opt.tol = tol;
    const auto r = nelder_mead(objective, start, opt);
    return {r.x, r.value, r.iterations, r.converged};
}

FitResult fit_pair(const ScoreSpec& score, std::span<const double> y,
                   const std::optional<Eigen::VectorXd>& init, double tol) {
    if (!score.is_pair()) {
        throw PreconditionError("the pair model needs the mean-variance score, got " +
                                score.to_string());
    }
    const PreparedScore prepared(score, y);
    Eigen::VectorXd start(2);
    if (init) {
        if (init->size() != 2 || !((*init)[1] > 0.0)) {
            throw PreconditionError("pair model init needs (mean, variance) with variance > 0");
        }
        start << (*init)[0], std::log((*init)[1]);
    } else {
        const auto u = prediction_units(score, y);
        const auto m = summarize(u);
        double v = 0.0;
        for (double t : u) {
            v += (t - m.value) * (t - m.value);
        }
        v /= static_cast<double>(u.size());
        if (!(v > 0.0)) {
            throw PreconditionError("pair model needs observations that are not all equal");
        }
        start << m.value, std::log(v);
    }
    // Variance optimized on the log scale keeps every iterate positive.
    const auto objective = [&](const Eigen::VectorXd& p) {
        return prepared.mean(MeanVarPrediction{p[0], std::exp(p[1])});
    };
    SimplexOptions opt;
    opt.tol = tol;
    const auto r = nelder_mead(objective, start, opt);
    Eigen::VectorXd theta(2);
    theta << r.x[0], std::exp(r.x[1]);
    return {theta, r.value, r.iterations, r.converged};
}

}  // namespace

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::constant:
            return "constant";
        case ModelKind::linear:
            return "linear";
        case ModelKind::constant_pair:
            return "mvpair";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "constant") {
        return ModelKind::constant;
    }
    if (text == "linear") {
        return ModelKind::linear;
    }
    if (text == "mvpair") {
        return ModelKind::constant_pair;
    }
    throw ParseError("unknown model '" + std::string(text) + "' (constant, linear, mvpair)");
}

FitResult fit(ModelKind model, const ScoreSpec& score, std::span<const double> x,
              std::span<const double> y, const std::optional<Eigen::VectorXd>& init, double tol) {
    if (y.empty()) {
        throw PreconditionError("fit needs at least one observation");
    }
    if (!(tol > 0.0)) {
        throw PreconditionError("fit tolerance must be positive");
    }
    if (score.is_pair() != (model == ModelKind::constant_pair)) {
        throw PreconditionError("model '" + std::string(to_string(model)) +
                                "' does not match the arity of score " + score.to_string());
    }
    switch (model) {
        case ModelKind::constant:
            return fit_constant(score, y, tol);
        case ModelKind::linear:
            return fit_linear(score, x, y, init, tol);
        case ModelKind::constant_pair:
            return fit_pair(score, y, init, tol);
    }
    throw PreconditionError("unknown model");
}

}  // namespace elicit
