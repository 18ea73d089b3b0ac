#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "elicit/functional_spec.hpp"
#include "elicit/numerics.hpp"

namespace elicit {

namespace dist {
/// Finite moments of every order.
struct Normal {
    double mu;
    double sigma;
};
/// exp of Normal(mu, sigma); finite moments of every order (E[Y^a] = exp(a mu + a^2 sigma^2 / 2)).
struct Lognormal {
    double mu;
    double sigma;
};
/// Rate parameterization; finite moments, E[log Y] finite.
struct Exponential {
    double lambda;
};
struct Uniform {
    double a;
    double b;
};
/// Equally weighted atoms.
struct Empirical {
    std::vector<double> values;
};
}  // namespace dist

/// Distribution F: a parametric family or an empirical sample.
class DistributionSpec {
public:
    using Variant =
        std::variant<dist::Normal, dist::Lognormal, dist::Exponential, dist::Uniform, dist::Empirical>;

    DistributionSpec(Variant v);

    const Variant& variant() const { return v_; }
    bool is_continuous() const { return !std::holds_alternative<dist::Empirical>(v_); }

    /// Smallest interval holding the support (open for continuous families).
    Interval support() const;

    /// Text encoding: `normal(0,1)`, `lognormal(0,1)`, `exponential(1)`, `uniform(0,1)`, `empirical(1,2,3)`.
    std::string to_string() const;

private:
    Variant v_;
};

DistributionSpec parse_distribution(std::string_view text);

/// n iid draws, reproducible for a given seed.
std::vector<double> sample_iid(const DistributionSpec& d, std::size_t n, Seed seed);

/// P(Y <= y); step function for empirical distributions.
double cdf(const DistributionSpec& d, double y);

/// Inverse CDF of a continuous family at tau in (0,1).
double quantile(const DistributionSpec& d, double tau);

/// E[Y] and Var[Y] in closed form.
double mean(const DistributionSpec& d);
double variance(const DistributionSpec& d);

/// Upper partial moment E[(Y - z)_+], the building block of the expectile equation.
double upper_partial_moment(const DistributionSpec& d, double z);

/// Empirical tau-quantile interval {z : F(z-) <= tau <= F(z)} of a sample.
ValueInterval empirical_quantile_interval(std::vector<double> values, double tau);

/// Closed-form value of the functional, or nullopt when none is known (the
/// caller then falls back to Monte Carlo). Throws DomainError when the
/// functional's transform is undefined on the support.
std::optional<FunctionalValue> analytic_functional(const DistributionSpec& d,
                                                   const FunctionalSpec& f);

/// Throws DomainError unless the support lies inside g's domain.
void require_support_in_domain(const DistributionSpec& d, const Bijection& g);

}  // namespace elicit
