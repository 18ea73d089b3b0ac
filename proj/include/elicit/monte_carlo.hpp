#pragma once

#include <cstddef>

#include "elicit/distributions.hpp"
#include "elicit/numerics.hpp"

namespace elicit {

/// (1/n) sum h(y_i) over n iid draws of `d`, with its standard error.
/// Throws EvaluationError naming the draw when h is non-finite.
McEstimate mc_expectation(const ScalarFunction& h, const DistributionSpec& d, std::size_t n,
                          Seed seed);

}  // namespace elicit
