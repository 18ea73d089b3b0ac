#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "elicit/scoring.hpp"

namespace elicit {

/// m(x, theta): theta; theta0 + theta1 x; or the (mean, variance) pair theta.
enum class ModelKind { constant, linear, constant_pair };

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view text);

struct FitResult {
    Eigen::VectorXd theta;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Minimizes the realized average score (1/l) sum S(m(x_i, theta), y_i).
/// `x` is used only by the linear model; `init` defaults to a least-squares
/// or moment start.
FitResult fit(ModelKind model, const ScoreSpec& score, std::span<const double> x,
              std::span<const double> y, const std::optional<Eigen::VectorXd>& init = std::nullopt,
              double tol = 1e-10);

}  // namespace elicit
