#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elicit/distributions.hpp"
#include "elicit/functional_spec.hpp"
#include "elicit/identification.hpp"
#include "elicit/numerics.hpp"
#include "elicit/scoring.hpp"
#include "elicit/transforms.hpp"

namespace elicit {

enum class CheckKind {
    consistency,     ///< argmin of the expected score matches the functional
    strictness,      ///< no flat stretch of the expected-score curve away from its minimum
    identification,  ///< E[V] vanishes at the functional, and only there, with the right sign
    revelation,      ///< prediction-transformed score elicits g(T)
    realization,     ///< realization-transformed score elicits T of the law of g(Y)
    pair,            ///< mean-variance score recovers (E[g(Y)], Var[g(Y)])
    agreement,       ///< two scores share their minimizer
    osband,          ///< dS/dz = h(z) V(z, y) at random smooth points
};

std::string_view to_string(CheckKind k);
CheckKind parse_check_kind(std::string_view text);

struct CheckConfig {
    std::string name;
    CheckKind kind = CheckKind::consistency;
    std::optional<DistributionSpec> dist;
    std::optional<ScoreSpec> score;
    std::optional<IdentSpec> ident;
    std::optional<FunctionalSpec> functional;
    /// Revelation and realization transform; for consistency and identification
    /// checks a set g makes the target T of the law of g(Y).
    std::optional<Bijection> g;
    std::optional<ScoreSpec> other_score;
    /// Monte Carlo size; 0 picks 4e6 for indicator families and 1e6 otherwise.
    std::size_t n = 0;
    std::optional<Seed> seed;
    std::optional<Bracket> bracket;
    std::size_t points = 201;
    /// Variance axis of the pair grid.
    std::optional<Bracket> bracket2;
    std::size_t pair_points = 21;
    /// Unset tolerances take the per-kind defaults.
    std::optional<double> tol_abs;
    std::optional<double> tol_rel;
    std::vector<double> offsets{-0.25, 0.25};
    std::optional<std::vector<double>> target_override;
    std::size_t osband_points = 100;
    bool expect_pass = true;
};

struct VerificationReport {
    std::string check;
    CheckKind kind = CheckKind::consistency;
    bool pass = false;
    bool expect_pass = true;
    std::vector<double> estimate;
    std::vector<double> target;
    std::vector<double> std_error;
    double tol_abs = 0.0;
    double tol_rel = 0.0;
    std::uint64_t seed = 0;
    double ms = 0.0;
    std::vector<std::string> notes;

    /// pass == expect_pass.
    bool as_expected() const { return pass == expect_pass; }
};

/// |estimate - target| <= max(tol_abs, tol_rel |target|, 3 stderr).
bool within_tolerance(double estimate, double target, double std_error, double tol_abs,
                      double tol_rel);

/// Runs one check with the given seed. Errors become a failing report.
VerificationReport run_check(const CheckConfig& cfg, Seed seed);

/// Runs every check on `jobs` threads. Check i uses its explicit seed or
/// derive_seed(master, i); the output order is the input order.
std::vector<VerificationReport> run_suite(const std::vector<CheckConfig>& configs, Seed master,
                                          std::size_t jobs);

struct CurveRow {
    double z;
    double escore;
    double std_error;
};

/// Empirical expected score on an evenly spaced grid, every point scored
/// against the same n draws.
std::vector<CurveRow> expected_score_curve(const ScoreSpec& score, const DistributionSpec& d,
                                           const Bracket& bracket, std::size_t points,
                                           std::size_t n, Seed seed);

/// Parses `[check]` blocks of `key = value` lines; `#` starts a comment.
std::vector<CheckConfig> parse_suite(std::string_view text);

/// Text of a built-in suite (`paper-core`), or nullopt.
std::optional<std::string_view> builtin_suite(std::string_view name);

}  // namespace elicit
