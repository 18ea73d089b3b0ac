#include "elicit/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace elicit {

namespace {

struct Run {
    Eigen::VectorXd x;
    double value;
    std::size_t iterations;
    bool converged;
};

Run single_run(const std::function<double(const Eigen::VectorXd&)>& raw, const Eigen::VectorXd& x0,
               const SimplexOptions& opt) {
    const auto f = [&](const Eigen::VectorXd& x) {
        const double v = raw(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    const auto dim = x0.size();
    std::vector<Eigen::VectorXd> pts(dim + 1, x0);
    std::vector<double> vals(dim + 1);
    for (Eigen::Index i = 0; i < dim; ++i) {
        pts[i + 1][i] += opt.initial_step * std::max(1.0, std::abs(x0[i]));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        vals[i] = f(pts[i]);
    }
    std::vector<std::size_t> order(pts.size());
    std::size_t it = 0;
    bool converged = false;
    for (; it < opt.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        double spread = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            spread = std::max(spread, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
        }
        const double scale = 1.0 + pts[best].cwiseAbs().maxCoeff();
        const double fspread = vals[worst] - vals[best];
        if (spread <= opt.tol * scale &&
            fspread <= opt.tol * (std::abs(vals[best]) + opt.tol)) {
            converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i != worst) {
                centroid += pts[i];
            }
        }
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
        const double fr = f(reflected);
        if (fr < vals[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                                   : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = f(contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i != best) {
                pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                vals[i] = f(pts[i]);
            }
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], it, converged};
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& options) {
    Run run = single_run(f, x0, options);
    std::size_t total = run.iterations;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        const Run again = single_run(f, run.x, options);
        total += again.iterations;
        const bool material = again.value < run.value - options.tol * (std::abs(run.value) + options.tol);
        if (again.value < run.value) {
            run = again;
        }
        if (!material) {
            run.converged = again.converged;
            break;
        }
    }
    return {run.x, run.value, total, run.converged};
}

}  // namespace elicit
