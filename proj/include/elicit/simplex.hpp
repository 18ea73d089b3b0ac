#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace elicit {

struct SimplexOptions {
    double tol = 1e-10;          ///< relative spread of vertex values and positions
    double initial_step = 0.05;  ///< vertex offset, relative to max(1, |x_i|)
    std::size_t max_iterations = 5000;
    std::size_t restarts = 3;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Nelder-Mead minimization, restarted from the best vertex until a restart no
/// longer improves. Non-finite objective values count as +inf.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& options = {});

}  // namespace elicit
