#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "elicit/distributions.hpp"
#include "elicit/numerics.hpp"
#include "elicit/scoring.hpp"
#include "elicit/transforms.hpp"

namespace elicit {

namespace ident {
/// z - y.
struct Mean {};
/// 1{z >= y} - tau.
struct Quantile {
    double tau;
};
/// 2 |1{z >= y} - tau| (z - y).
struct Expectile {
    double tau;
};
/// (x1 - y, x2 + x1^2 - y^2).
struct MeanVariance {};
}  // namespace ident

/// Strict identification function V composed with a transform mode.
class IdentSpec {
public:
    using Family = std::variant<ident::Mean, ident::Quantile, ident::Expectile, ident::MeanVariance>;

    IdentSpec(Family family, TransformMode mode = {});

    const Family& family() const { return family_; }
    const TransformMode& mode() const { return mode_; }
    bool is_pair() const { return std::holds_alternative<ident::MeanVariance>(family_); }

    /// +1 when E[V(z, Y)] increases through zero at the functional, -1 when a
    /// decreasing transform flips the orientation.
    int orientation() const { return mode_.prediction_orientation(); }

    /// `mean@both:log`, `quantile:tau=0.9`, `mv@realization:log`.
    std::string to_string() const;

private:
    Family family_;
    TransformMode mode_;
};

IdentSpec parse_ident_spec(std::string_view text);

struct IdentFamilyInfo {
    std::string name;
    std::string encoding;
    std::string formula;
};
const std::vector<IdentFamilyInfo>& ident_families();

double evaluate_identification(const IdentSpec& spec, double z, double y);
std::array<double, 2> evaluate_identification(const IdentSpec& spec, MeanVarPrediction x, double y);

/// Identification function bound to fixed realizations (transforms applied once).
class PreparedIdentification {
public:
    PreparedIdentification(IdentSpec spec, std::span<const double> y);

    const IdentSpec& spec() const { return spec_; }

    McEstimate mean(double z) const;
    std::array<McEstimate, 2> mean(MeanVarPrediction x) const;

private:
    IdentSpec spec_;
    std::vector<double> yt_;
};

struct OffsetProbe {
    double offset;
    McEstimate estimate;
    bool ok;
};

struct OrientationReport {
    bool pass = true;
    int expected_orientation = 1;
    std::vector<OffsetProbe> probes;
};

/// Estimates E[V(t* + d, Y)] for each offset d; passes when every estimate has
/// sign orientation * sign(d) and exceeds 3 standard errors in magnitude.
OrientationReport orientation_probe(const IdentSpec& spec, const DistributionSpec& d,
                                    double functional_value, std::span<const double> offsets,
                                    std::size_t n, Seed seed);

/// Weight h in dS/dz = h(z) V(z, y) for the built-in (score, identification) pairings.
using OsbandWeight = std::function<double(double)>;

/// The hard-coded pairing table; nullopt when the pair is not built in.
std::optional<OsbandWeight> builtin_osband_weight(const ScoreSpec& score, const IdentSpec& ident);

struct OsbandResult {
    bool applicable = true;
    double max_residual = 0.0;
    std::string note;
};

/// max over points of |central_diff(S(., y), z, step) - h(z) V(z, y)|. Points
/// within 1e-6 max(1,|y|) of the kink z = y raise PreconditionError. A
/// non-positive step selects default_step(z).
OsbandResult osband_residual(const ScoreSpec& score, const IdentSpec& ident, const OsbandWeight& h,
                             std::span<const std::pair<double, double>> points, double step = 0.0);

}  // namespace elicit
