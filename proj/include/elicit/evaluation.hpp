#pragma once

#include <span>
#include <vector>

#include "elicit/scoring.hpp"
#include "elicit/transforms.hpp"

namespace elicit {

/// Tag selecting the skill score of a family whose optimal average score is 0.
struct ZeroOptimum {};

/// (S(z) - S(z_ref)) / (S(z_opt) - S(z_ref)) on realized average scores.
double skill_score(const ScoreSpec& score, std::span<const double> z, std::span<const double> z_ref,
                   std::span<const double> z_opt, std::span<const double> y);

/// 1 - S(z) / S(z_ref).
double skill_score(const ScoreSpec& score, std::span<const double> z, std::span<const double> z_ref,
                   ZeroOptimum, std::span<const double> y);

/// Sample mean of y.
double climatology(std::span<const double> y);

/// Nash-Sutcliffe efficiency: squared-error skill against the mean climatology.
double nse(std::span<const double> z, std::span<const double> y);

/// g^{-1}(mean of g(y_i)); the reference forecast repeats this value.
double transformed_climatology(const Bijection& g, std::span<const double> y);

}  // namespace elicit
