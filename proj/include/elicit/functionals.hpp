#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elicit/distributions.hpp"
#include "elicit/functional_spec.hpp"
#include "elicit/numerics.hpp"
#include "elicit/transforms.hpp"

namespace elicit {

/// kappa_{a,b}(t) = max(min(t, b), -a); a and b may be infinite.
double capping(double a, double b, double t);

/// A functional value with one standard error per coordinate (zero on the analytic path).
struct FunctionalEstimate {
    FunctionalValue value;
    std::vector<double> std_error;
    bool analytic = false;
    std::string note;
};

/// T(F), analytically when a closed form is known, else from n draws.
FunctionalEstimate functional_value(const FunctionalSpec& spec, const DistributionSpec& d,
                                    std::size_t n, Seed seed);

/// T applied to the law of g(Y), computed from transformed draws unless a
/// closed form is known. g need not be invertible.
FunctionalEstimate image_functional_value(const FunctionalSpec& spec, const DistributionSpec& d,
                                          const Bijection& g, std::size_t n, Seed seed);

/// g^{-1}(Q^tau(F^{(g)})) expressed as a quantile level of F: tau for increasing
/// g, 1 - tau for decreasing g.
double pulled_back_quantile_level(const Bijection& g, double tau);

}  // namespace elicit
