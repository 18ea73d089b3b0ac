#include "elicit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "elicit/error.hpp"
#include "elicit/functionals.hpp"
#include "elicit/simplex.hpp"
#include "elicit/text.hpp"

namespace elicit {

namespace {

struct Tolerance {
    double abs;
    double rel;
};

Tolerance default_tolerance(CheckKind k) {
    switch (k) {
        case CheckKind::identification:
            return {0.0, 0.0};
        case CheckKind::osband:
            return {1e-6, 0.0};
        default:
            return {1e-3, 0.02};
    }
}

Tolerance tolerance_of(const CheckConfig& cfg) {
    const auto d = default_tolerance(cfg.kind);
    return {cfg.tol_abs.value_or(d.abs), cfg.tol_rel.value_or(d.rel)};
}

bool indicator_based(const CheckConfig& cfg) {
    const bool score_kinked = cfg.score && cfg.score->is_piecewise();
    const bool ident_kinked = cfg.ident && std::holds_alternative<ident::Quantile>(cfg.ident->family());
    return score_kinked || ident_kinked;
}

std::size_t sample_size(const CheckConfig& cfg) {
    if (cfg.n != 0) {
        return cfg.n;
    }
    return indicator_based(cfg) ? 4'000'000 : 1'000'000;
}

std::string fmt(double v) { return text::format_double(v); }

std::vector<double> grid_of(const Bracket& b, std::size_t points) {
    if (points < 3) {
        throw PreconditionError("a grid needs at least 3 points");
    }
    std::vector<double> out(points);
    const double step = b.width() / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = b.lo() + step * static_cast<double>(i);
    }
    out.back() = b.hi();
    return out;
}

template <class T>
const T& require(const std::optional<T>& v, std::string_view key, const CheckConfig& cfg) {
    if (!v) {
        throw PreconditionError("check '" + cfg.name + "' (" + std::string(to_string(cfg.kind)) +
                                ") needs '" + std::string(key) + "'");
    }
    return *v;
}

struct Target {
    std::vector<double> value;
    std::vector<double> std_error;
};

/// The functional's value, or T of the law of g(Y) when `image` is set.
Target resolve_target(const CheckConfig& cfg, const Bijection* image, std::size_t n, Seed seed,
                      std::vector<std::string>& notes) {
    if (cfg.target_override) {
        return {*cfg.target_override, std::vector<double>(cfg.target_override->size(), 0.0)};
    }
    const auto& f = require(cfg.functional, "functional", cfg);
    const auto& d = require(cfg.dist, "dist", cfg);
    const Seed target_seed = derive_seed(seed, 1);
    const auto est = image ? image_functional_value(f, d, *image, n, target_seed)
                           : functional_value(f, d, n, target_seed);
    notes.push_back("target " + f.to_string() + (image ? " of g(Y), g=" + image->to_string() : "") +
                    ": " + est.note);
    Target t;
    t.std_error = est.std_error;
    if (const auto* v = std::get_if<double>(&est.value)) {
        t.value = {*v};
    } else if (const auto* i = std::get_if<ValueInterval>(&est.value)) {
        t.value = {i->lo};
        if (i->hi != i->lo) {
            notes.push_back("set-valued target [" + fmt(i->lo) + ", " + fmt(i->hi) +
                            "], lower endpoint used");
        }
    } else {
        const auto& p = std::get<ValuePair>(est.value);
        t.value = {p.first, p.second};
    }
    return t;
}

struct Argmin {
    double z;
    double std_error;
    std::vector<double> grid;
};

/// Standard error of an M-estimate: sd of the score slope over the curvature
/// of the expected score, the latter from differenced average slopes.
double sandwich_se(const PreparedScore& p, double z, double h, std::vector<std::string>& notes) {
    try {
        std::vector<double> slopes(p.size());
        p.derivatives(z, slopes);
        const auto s = summarize(slopes);
        const double curvature = (p.mean_derivative(z + h) - p.mean_derivative(z - h)) / (2.0 * h);
        if (!(curvature > 0.0) || !std::isfinite(curvature)) {
            notes.push_back("curvature estimate not positive; stderr reported as 0");
            return 0.0;
        }
        return s.std_error / curvature;
    } catch (const Error& e) {
        notes.push_back(std::string("stderr unavailable: ") + e.what());
        return 0.0;
    }
}

/// Grid search over the bracket, then a bracketed polish between the best
/// point's neighbours.
Argmin empirical_argmin(const PreparedScore& p, const Bracket& b, std::size_t points,
                        std::vector<std::string>& notes) {
    Argmin out{0.0, 0.0, grid_of(b, points)};
    const auto& grid = out.grid;
    std::vector<double> curve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        curve[i] = p.mean(grid[i]);
    }
    const auto best = static_cast<std::size_t>(std::min_element(curve.begin(), curve.end()) -
                                               curve.begin());
    if (best == 0 || best + 1 == grid.size()) {
        throw BracketError("empirical minimizer of " + p.spec().to_string() +
                           " sits on the bracket endpoint z=" + fmt(grid[best]) + " of [" +
                           fmt(b.lo()) + ", " + fmt(b.hi()) + "]");
    }
    const auto objective = [&](double z) { return p.mean(z); };
    // Far below Monte Carlo noise; finer polishing only costs passes over the draws.
    const double step = grid[1] - grid[0];
    double z = minimize1d(objective, Bracket(grid[best - 1], grid[best + 1]),
                          std::max(1e-10 * std::max(1.0, std::abs(grid[best])), 1e-6 * step));
    if (objective(z) > curve[best]) {
        z = grid[best];
    }
    out.z = z;
    out.std_error = sandwich_se(p, z, 0.5 * (grid[1] - grid[0]), notes);
    return out;
}

struct DiffStats {
    double mean;
    double std_error;
};

/// Mean and standard error of S(z, Y) - S(reference, Y) over the draws.
DiffStats score_difference(const PreparedScore& p, std::span<const double> reference, double z,
                           std::vector<double>& scratch) {
    p.scores(z, scratch);
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        scratch[i] -= reference[i];
    }
    const auto s = summarize(scratch);
    return {s.value, s.std_error};
}

/// E[S(t, Y)] <= E[S(z, Y)] + 3 stderr at every grid point.
bool dominates(const PreparedScore& p, double t, std::span<const double> grid,
               std::vector<std::string>& notes) {
    std::vector<double> at_target(p.size());
    std::vector<double> scratch(p.size());
    p.scores(t, at_target);
    bool ok = true;
    for (double z : grid) {
        const auto d = score_difference(p, at_target, z, scratch);
        // d estimates E[S(z)] - E[S(t)], which must not be clearly negative.
        if (d.mean < -3.0 * d.std_error - 1e-12 * std::max(1.0, std::abs(d.mean))) {
            if (ok) {
                notes.push_back("expected score at z=" + fmt(z) + " is below the target's by " +
                                fmt(-d.mean) + " (stderr " + fmt(d.std_error) + ")");
            }
            ok = false;
        }
    }
    return ok;
}

void finish_scalar(VerificationReport& r, double estimate, double target, double se, Tolerance tol) {
    r.estimate = {estimate};
    r.target = {target};
    r.std_error = {se};
    r.tol_abs = tol.abs;
    r.tol_rel = tol.rel;
}

void consistency_core(const CheckConfig& cfg, const ScoreSpec& score, const Target& target,
                      std::span<const double> draws, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& bracket = require(cfg.bracket, "bracket", cfg);
    const double t = target.value.at(0);
    if (!bracket.contains(t)) {
        throw PreconditionError("bracket [" + fmt(bracket.lo()) + ", " + fmt(bracket.hi()) +
                                "] excludes the target " + fmt(t));
    }
    const PreparedScore p(score, draws);
    const auto am = empirical_argmin(p, bracket, cfg.points, r.notes);
    const double se = std::hypot(am.std_error, target.std_error.at(0));
    finish_scalar(r, am.z, t, se, tol);
    const bool close = within_tolerance(am.z, t, se, tol.abs, tol.rel);
    const bool dominant = dominates(p, t, am.grid, r.notes);
    r.pass = close && dominant;
}

void check_consistency(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const Bijection* image = cfg.g ? &*cfg.g : nullptr;
    const auto target = resolve_target(cfg, image, n, seed, r.notes);
    consistency_core(cfg, require(cfg.score, "score", cfg), target, draws, r);
}

void check_realization(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto& base = require(cfg.score, "score", cfg);
    const auto& g = require(cfg.g, "g", cfg);
    if (base.mode().kind() != TransformKind::none) {
        throw PreconditionError("realization check expects an untransformed score, got " +
                                base.to_string());
    }
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const auto target = resolve_target(cfg, &g, n, seed, r.notes);
    const auto score = base.with_mode(TransformMode::realization(g));
    r.notes.push_back("score " + score.to_string());
    consistency_core(cfg, score, target, draws, r);
}

void check_revelation(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& base = require(cfg.score, "score", cfg);
    const auto& g = require(cfg.g, "g", cfg);
    const auto& bracket = require(cfg.bracket, "bracket", cfg);
    if (base.mode().kind() != TransformKind::none) {
        throw PreconditionError("revelation check expects an untransformed score, got " +
                                base.to_string());
    }
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const auto target = resolve_target(cfg, nullptr, n, seed, r.notes);

    const PreparedScore p_base(base, draws);
    const auto am_base = empirical_argmin(p_base, bracket, cfg.points, r.notes);

    const auto score = base.with_mode(TransformMode::prediction(g));
    const double a = g.apply(bracket.lo());
    const double b = g.apply(bracket.hi());
    const Bracket mapped(std::min(a, b), std::max(a, b));
    const PreparedScore p(score, draws);
    const auto am = empirical_argmin(p, mapped, cfg.points, r.notes);

    const double t = g.apply(target.value.at(0));
    const double via_base = g.apply(am_base.z);
    const double se = std::hypot(am.std_error, target.std_error.at(0) * std::abs(g.deriv(target.value[0])));
    finish_scalar(r, am.z, t, se, tol);
    r.notes.push_back("score " + score.to_string() + "; g(z* of base) = " + fmt(via_base));
    const bool close = within_tolerance(am.z, t, se, tol.abs, tol.rel);
    const bool coherent = within_tolerance(am.z, via_base, 0.0, tol.abs, tol.rel);
    if (!coherent) {
        r.notes.push_back("transformed minimizer disagrees with g(z* of base)");
    }
    r.pass = close && coherent && dominates(p, t, am.grid, r.notes);
}

void check_agreement(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& first = require(cfg.score, "score", cfg);
    const auto& second = require(cfg.other_score, "other", cfg);
    const auto& bracket = require(cfg.bracket, "bracket", cfg);
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const auto a = empirical_argmin(PreparedScore(first, draws), bracket, cfg.points, r.notes);
    const auto b = empirical_argmin(PreparedScore(second, draws), bracket, cfg.points, r.notes);
    const double se = std::hypot(a.std_error, b.std_error);
    finish_scalar(r, a.z, b.z, se, tol);
    r.notes.push_back("estimate: argmin of " + first.to_string() + "; target: argmin of " +
                      second.to_string());
    r.pass = within_tolerance(a.z, b.z, se, tol.abs, tol.rel);
}

void check_strictness(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& score = require(cfg.score, "score", cfg);
    const auto& bracket = require(cfg.bracket, "bracket", cfg);
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const PreparedScore p(score, draws);
    const auto am = empirical_argmin(p, bracket, cfg.points, r.notes);
    const double zone = std::max(tol.abs, tol.rel * std::max(1.0, std::abs(am.z)));

    std::vector<double> at_min(p.size());
    std::vector<double> scratch(p.size());
    p.scores(am.z, at_min);
    double radius = 0.0;
    for (double z : am.grid) {
        const auto d = score_difference(p, at_min, z, scratch);
        if (d.mean <= 3.0 * d.std_error) {
            radius = std::max(radius, std::abs(z - am.z));
        }
    }
    // Reported as the radius of the flat-within-noise set around z*, against 0.
    finish_scalar(r, radius, 0.0, 0.0, {zone, 0.0});
    r.notes.push_back("z* = " + fmt(am.z) + "; flat radius must not exceed " + fmt(zone));
    r.pass = within_tolerance(radius, 0.0, 0.0, zone, 0.0);
}

void check_identification(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& ident = require(cfg.ident, "ident", cfg);
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const Bijection* image = cfg.g ? &*cfg.g : nullptr;
    const auto target = resolve_target(cfg, image, n, seed, r.notes);
    const PreparedIdentification v(ident, draws);

    if (ident.is_pair()) {
        if (target.value.size() != 2) {
            throw PreconditionError("mean-variance identification needs a pair-valued target");
        }
        const auto e = v.mean(MeanVarPrediction{target.value[0], target.value[1]});
        r.estimate = {e[0].value, e[1].value};
        r.target = {0.0, 0.0};
        r.std_error = {e[0].std_error, e[1].std_error};
        r.tol_abs = tol.abs;
        r.tol_rel = tol.rel;
        r.pass = within_tolerance(e[0].value, 0.0, e[0].std_error, tol.abs, tol.rel) &&
                 within_tolerance(e[1].value, 0.0, e[1].std_error, tol.abs, tol.rel);
        return;
    }

    const double t = target.value.at(0);
    const auto at_t = v.mean(t);
    finish_scalar(r, at_t.value, 0.0, at_t.std_error, tol);
    bool ok = within_tolerance(at_t.value, 0.0, at_t.std_error, tol.abs, tol.rel);

    const int orientation = ident.orientation();
    for (double offset : cfg.offsets) {
        if (offset == 0.0) {
            throw PreconditionError("orientation offsets must be non-zero");
        }
        const auto e = v.mean(t + offset);
        const double expected = offset > 0.0 ? orientation : -orientation;
        const bool good = e.value * expected > 0.0 && std::abs(e.value) > 3.0 * e.std_error;
        r.notes.push_back("E[V](t*" + std::string(offset > 0 ? "+" : "") + fmt(offset) + ") = " +
                          fmt(e.value) + " (stderr " + fmt(e.std_error) + ")" +
                          (good ? "" : " wrong sign or within noise"));
        ok = ok && good;
    }

    if (cfg.bracket) {
        // Away from t*, E[V] must be distinguishable from zero.
        const double zone = std::max(1e-3, 0.02 * std::max(1.0, std::abs(t)));
        for (double z : grid_of(*cfg.bracket, cfg.points)) {
            if (std::abs(z - t) <= zone) {
                continue;
            }
            const auto e = v.mean(z);
            if (std::abs(e.value) <= 3.0 * e.std_error) {
                r.notes.push_back("E[V] indistinguishable from 0 at z=" + fmt(z));
                ok = false;
                break;
            }
        }
    }
    r.pass = ok;
}

void check_pair(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& score = require(cfg.score, "score", cfg);
    const auto& b1 = require(cfg.bracket, "bracket", cfg);
    const auto& b2 = require(cfg.bracket2, "bracket2", cfg);
    if (!score.is_pair()) {
        throw PreconditionError("pair check needs the mean-variance score");
    }
    if (!(b2.lo() > 0.0)) {
        throw PreconditionError("variance grid must be positive");
    }
    const auto n = sample_size(cfg);
    const auto draws = sample_iid(require(cfg.dist, "dist", cfg), n, derive_seed(seed, 0));
    const auto target = resolve_target(cfg, nullptr, n, seed, r.notes);
    if (target.value.size() != 2) {
        throw PreconditionError("pair check needs a pair-valued target");
    }
    const PreparedScore p(score, draws);

    const auto g1 = grid_of(b1, cfg.pair_points);
    const auto g2 = grid_of(b2, cfg.pair_points);
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        for (std::size_t j = 0; j < g2.size(); ++j) {
            const double v = p.mean(MeanVarPrediction{g1[i], g2[j]});
            if (v < best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    const auto last = cfg.pair_points - 1;
    if (bi == 0 || bj == 0 || bi == last || bj == last) {
        throw BracketError("pair grid minimum (" + fmt(g1[bi]) + ", " + fmt(g2[bj]) +
                           ") lies on the grid boundary");
    }
    Eigen::VectorXd start(2);
    start << g1[bi], std::log(g2[bj]);
    const auto polished = nelder_mead(
        [&](const Eigen::VectorXd& q) { return p.mean(MeanVarPrediction{q[0], std::exp(q[1])}); },
        start);
    const double x1 = polished.x[0];
    const double x2 = std::exp(polished.x[1]);

    // The empirical minimizer is the sample (mean, variance) of g(Y); its
    // standard errors follow from the moments.
    std::vector<double> u(draws.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = score.mode().map_realization(draws[i]);
    }
    const auto m = summarize(u);
    for (double& x : u) {
        x = (x - m.value) * (x - m.value);
    }
    const auto v2 = summarize(u);
    const double se1 = std::hypot(m.std_error, target.std_error.at(0));
    const double se2 = std::hypot(v2.std_error, target.std_error.at(1));

    r.estimate = {x1, x2};
    r.target = target.value;
    r.std_error = {se1, se2};
    r.tol_abs = tol.abs;
    r.tol_rel = tol.rel;
    bool ok = within_tolerance(x1, target.value[0], se1, tol.abs, tol.rel) &&
              within_tolerance(x2, target.value[1], se2, tol.abs, tol.rel);

    const PreparedIdentification ident(IdentSpec(ident::MeanVariance{}, score.mode()), draws);
    const auto e = ident.mean(MeanVarPrediction{target.value[0], target.value[1]});
    const bool zero = std::abs(e[0].value) <= 3.0 * e[0].std_error &&
                      std::abs(e[1].value) <= 3.0 * e[1].std_error;
    r.notes.push_back("E[V] at target = (" + fmt(e[0].value) + ", " + fmt(e[1].value) +
                      "), stderr (" + fmt(e[0].std_error) + ", " + fmt(e[1].std_error) + ")" +
                      (zero ? "" : " not within 3 stderr of 0"));
    r.pass = ok && zero;
}

void check_osband(const CheckConfig& cfg, Seed seed, VerificationReport& r) {
    const auto tol = tolerance_of(cfg);
    const auto& score = require(cfg.score, "score", cfg);
    const auto& ident = require(cfg.ident, "ident", cfg);
    const auto& d = require(cfg.dist, "dist", cfg);
    finish_scalar(r, 0.0, 0.0, 0.0, tol);
    const auto h = builtin_osband_weight(score, ident);
    if (!h) {
        r.pass = false;
        r.estimate = {};
        r.notes.push_back("not applicable: no built-in weight h for " + score.to_string() + " / " +
                          ident.to_string());
        return;
    }
    // Random (z, y) pairs from the distribution, kept clear of the kink z = y.
    std::vector<std::pair<double, double>> points;
    std::uint64_t round = 0;
    while (points.size() < cfg.osband_points) {
        const auto draws = sample_iid(d, 2 * cfg.osband_points, derive_seed(seed, round++));
        for (std::size_t i = 0; i + 1 < draws.size() && points.size() < cfg.osband_points; i += 2) {
            const double z = draws[i];
            const double y = draws[i + 1];
            if (std::abs(z - y) > 1e-3 * std::max(1.0, std::abs(y))) {
                points.emplace_back(z, y);
            }
        }
        if (round > 100) {
            throw PreconditionError("could not draw enough points away from the kink");
        }
    }
    const auto res = osband_residual(score, ident, *h, points);
    if (!res.applicable) {
        r.pass = false;
        r.estimate = {};
        r.notes.push_back("not applicable: " + res.note);
        return;
    }
    r.estimate = {res.max_residual};
    r.notes.push_back(std::to_string(points.size()) + " points");
    r.pass = within_tolerance(res.max_residual, 0.0, 0.0, tol.abs, tol.rel);
}

}  // namespace

std::string_view to_string(CheckKind k) {
    switch (k) {
        case CheckKind::consistency:
            return "consistency";
        case CheckKind::strictness:
            return "strictness";
        case CheckKind::identification:
            return "identification";
        case CheckKind::revelation:
            return "revelation";
        case CheckKind::realization:
            return "realization";
        case CheckKind::pair:
            return "pair";
        case CheckKind::agreement:
            return "agreement";
        case CheckKind::osband:
            return "osband";
    }
    return "?";
}

CheckKind parse_check_kind(std::string_view text) {
    for (auto k : {CheckKind::consistency, CheckKind::strictness, CheckKind::identification,
                   CheckKind::revelation, CheckKind::realization, CheckKind::pair,
                   CheckKind::agreement, CheckKind::osband}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw ParseError("unknown check kind '" + std::string(text) + "'");
}

bool within_tolerance(double estimate, double target, double std_error, double tol_abs,
                      double tol_rel) {
    const double band = std::max({tol_abs, tol_rel * std::abs(target), 3.0 * std_error});
    return std::abs(estimate - target) <= band;
}

VerificationReport run_check(const CheckConfig& cfg, Seed seed) {
    VerificationReport r;
    r.check = cfg.name;
    r.kind = cfg.kind;
    r.expect_pass = cfg.expect_pass;
    r.seed = seed.value;
    const auto tol = tolerance_of(cfg);
    r.tol_abs = tol.abs;
    r.tol_rel = tol.rel;
    const auto start = std::chrono::steady_clock::now();
    try {
        switch (cfg.kind) {
            case CheckKind::consistency:
                check_consistency(cfg, seed, r);
                break;
            case CheckKind::strictness:
                check_strictness(cfg, seed, r);
                break;
            case CheckKind::identification:
                check_identification(cfg, seed, r);
                break;
            case CheckKind::revelation:
                check_revelation(cfg, seed, r);
                break;
            case CheckKind::realization:
                check_realization(cfg, seed, r);
                break;
            case CheckKind::pair:
                check_pair(cfg, seed, r);
                break;
            case CheckKind::agreement:
                check_agreement(cfg, seed, r);
                break;
            case CheckKind::osband:
                check_osband(cfg, seed, r);
                break;
        }
    } catch (const std::exception& e) {
        r.pass = false;
        r.notes.push_back(std::string("error: ") + e.what());
    }
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<VerificationReport> run_suite(const std::vector<CheckConfig>& configs, Seed master,
                                          std::size_t jobs) {
    std::vector<VerificationReport> reports(configs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            const auto& cfg = configs[i];
            reports[i] = run_check(cfg, cfg.seed.value_or(derive_seed(master, i)));
        }
    };
    const auto threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, configs.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    pool.clear();  // joins
    return reports;
}

std::vector<CurveRow> expected_score_curve(const ScoreSpec& score, const DistributionSpec& d,
                                           const Bracket& bracket, std::size_t points,
                                           std::size_t n, Seed seed) {
    if (n < 2) {
        throw PreconditionError("curve needs n >= 2");
    }
    const auto draws = sample_iid(d, n, derive_seed(seed, 0));
    const PreparedScore p(score, draws);
    std::vector<double> scratch(n);
    std::vector<CurveRow> rows;
    for (double z : grid_of(bracket, points)) {
        p.scores(z, scratch);
        const auto s = summarize(scratch);
        rows.push_back({z, s.value, s.std_error});
    }
    return rows;
}

}  // namespace elicit
