#include "elicit/evaluation.hpp"

#include <numeric>
#include <string>

#include "elicit/error.hpp"

namespace elicit {

double skill_score(const ScoreSpec& score, std::span<const double> z, std::span<const double> z_ref,
                   std::span<const double> z_opt, std::span<const double> y) {
    const double s = average_score(score, z, y);
    const double s_ref = average_score(score, z_ref, y);
    const double s_opt = average_score(score, z_opt, y);
    if (s_opt == s_ref) {
        throw DegenerateReferenceError("reference and optimal predictions score the same (" +
                                       std::to_string(s_ref) + ")");
    }
    return (s - s_ref) / (s_opt - s_ref);
}

double skill_score(const ScoreSpec& score, std::span<const double> z, std::span<const double> z_ref,
                   ZeroOptimum, std::span<const double> y) {
    if (!score.has_zero_optimum()) {
        throw PreconditionError("score '" + score.to_string() + "' is not minimized at zero");
    }
    const double s_ref = average_score(score, z_ref, y);
    if (s_ref == 0.0) {
        throw DegenerateReferenceError("reference prediction has zero average score");
    }
    return 1.0 - average_score(score, z, y) / s_ref;
}

double climatology(std::span<const double> y) {
    if (y.empty()) {
        throw PreconditionError("climatology of an empty sample");
    }
    return std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
}

double nse(std::span<const double> z, std::span<const double> y) {
    if (y.size() < 2) {
        throw PreconditionError("nse needs at least two observations");
    }
    const std::vector<double> ref(y.size(), climatology(y));
    try {
        return skill_score(ScoreSpec(score::SquaredError{}), z, ref, ZeroOptimum{}, y);
    } catch (const DegenerateReferenceError&) {
        throw DegenerateReferenceError("nse is undefined for constant observations");
    }
}

double transformed_climatology(const Bijection& g, std::span<const double> y) {
    if (y.empty()) {
        throw PreconditionError("climatology of an empty sample");
    }
    if (!g.invertible()) {
        throw PreconditionError("transformed climatology needs an invertible g");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        try {
            acc += g.apply(y[i]);
        } catch (const DomainError& e) {
            throw DomainError("observation " + std::to_string(i) + ": " + e.what());
        }
    }
    return g.invert(acc / static_cast<double>(y.size()));
}

}  // namespace elicit
