#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace elicit {

/// Seed of a reproducible random stream.
struct Seed {
    std::uint64_t value = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

/// Derives the seed of stream `stream` from `master`; independent of scheduling order.
Seed derive_seed(Seed master, std::uint64_t stream);

/// Closed search interval with lo < hi, both finite.
class Bracket {
public:
    Bracket(double lo, double hi);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    bool contains(double z) const { return lo_ <= z && z <= hi_; }

private:
    double lo_;
    double hi_;
};

/// Monte Carlo mean with its standard error.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error (sample std / sqrt(n)) of `values`.
McEstimate summarize(std::span<const double> values);

using ScalarFunction = std::function<double(double)>;

/// Derivative-free bracketed minimization (Brent's golden-section/parabolic
/// method). The result is within `tol` of the minimizer of a unimodal `f`,
/// kinked objectives included. Smooth minima resolve only to about
/// sqrt(eps) times the scale of f, since flatter values compare equal.
double minimize1d(const ScalarFunction& f, const Bracket& bracket, double tol);

/// Bisection on a sign change of `f` over the bracket.
double root1d(const ScalarFunction& f, const Bracket& bracket, double tol);

/// Default central-difference step, 1e-6 * max(1, |z|).
double default_step(double z);

/// (f(z + step) - f(z - step)) / (2 step).
double central_diff(const ScalarFunction& f, double z, double step);

}  // namespace elicit
