#include "elicit/monte_carlo.hpp"

#include <cmath>
#include <sstream>

#include "elicit/error.hpp"

namespace elicit {

McEstimate mc_expectation(const ScalarFunction& h, const DistributionSpec& d, std::size_t n,
                          Seed seed) {
    if (n < 2) {
        throw PreconditionError("mc_expectation requires n >= 2");
    }
    auto draws = sample_iid(d, n, seed);
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double y = draws[i];
        const double v = h(y);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite integrand " << v << " at draw #" << i << " (y=" << y << ")";
            throw EvaluationError(msg.str());
        }
        draws[i] = v;
    }
    return summarize(draws);
}

}  // namespace elicit
