#include <sstream>

#include "elicit/error.hpp"
#include "elicit/text.hpp"
#include "elicit/verify.hpp"

namespace elicit {

namespace {

constexpr std::string_view core_suite = R"(# Core claims on concrete distributions.

# (z^a - y^a)^2 elicits exp(mu + a sigma^2 / 2) on a log-normal law.
[check]
name = lognormal-power/a=-1
kind = consistency
dist = lognormal(0,1)
score = se@both:power(-1)
functional = gmean:g=power(-1)
bracket = 0.1,5

[check]
name = lognormal-power/a=0.2
kind = consistency
dist = lognormal(0,1)
score = se@both:power(0.2)
functional = gmean:g=power(0.2)
bracket = 0.1,5

[check]
name = lognormal-power/a=0.5
kind = consistency
dist = lognormal(0,1)
score = se@both:power(0.5)
functional = gmean:g=power(0.5)
bracket = 0.1,5

[check]
name = lognormal-power/a=1
kind = consistency
dist = lognormal(0,1)
score = se@both:power(1)
functional = gmean:g=power(1)
bracket = 0.1,5

[check]
name = lognormal-power/a=2
kind = consistency
dist = lognormal(0,1)
score = se@both:power(2)
functional = gmean:g=power(2)
bracket = 0.1,5

# (log z - y)^2 on a standard normal law is minimized at exp(E[Y]).
[check]
name = revelation/se-exp
kind = revelation
dist = normal(0,1)
score = se
functional = mean
g = exp
bracket = -2,2

[check]
name = revelation/apl-log
kind = revelation
dist = exponential(1)
score = apl:tau=0.5
functional = quantile:tau=0.5
g = log
bracket = 0.05,3

# (z - log y)^2 elicits E[log Y].
[check]
name = realization/se-log
kind = realization
dist = lognormal(0.3,1)
score = se
functional = mean
g = log
bracket = -1,1.5
tol_abs = 0.01
tol_rel = 0

[check]
name = realization/se-square
kind = realization
dist = normal(0,1)
score = se
functional = mean
g = square
bracket = 0.2,3

[check]
name = realization/ae-log
kind = realization
dist = lognormal(0,1)
score = ae
functional = quantile:tau=0.5
g = log
bracket = -1.5,1.5

# A decreasing g turns the tau-quantile score into one for the (1-tau)-quantile.
[check]
name = quantile-flip/apl-negate
kind = consistency
dist = exponential(1)
score = apl:tau=0.25@both:negate
functional = quantile:tau=0.75
n = 4e6
bracket = 0.5,3

# The tau = 1/2 g-transformed expectile is the g-transformed expectation.
[check]
name = gexpectile-half/log
kind = agreement
dist = lognormal(0,1)
score = expectile:tau=0.5:phi=square@both:log
other = se@both:log
bracket = 0.2,4

[check]
name = identification/mean-normal
kind = identification
dist = normal(0,1)
ident = mean
functional = mean
bracket = -2,2
points = 41

[check]
name = identification/quantile-0.9-exponential
kind = identification
dist = exponential(1)
ident = quantile:tau=0.9
functional = quantile:tau=0.9
bracket = 1,4
points = 41

[check]
name = identification/median-exponential
kind = identification
dist = exponential(1)
ident = quantile:tau=0.5
functional = quantile:tau=0.5
bracket = 0.1,2
points = 41

[check]
name = identification/expectile-uniform
kind = identification
dist = uniform(0,1)
ident = expectile:tau=0.75
functional = expectile:tau=0.75
bracket = 0.05,0.95
points = 41

[check]
name = identification/expectile-log-lognormal
kind = identification
dist = lognormal(0,1)
ident = expectile:tau=0.75@both:log
functional = gexpectile:tau=0.75:g=log
bracket = 0.3,4
points = 41

[check]
name = identification/mean-log-lognormal
kind = identification
dist = lognormal(0,1)
ident = mean@both:log
functional = gmean:g=log
bracket = 0.3,4
points = 41

[check]
name = identification/mean-realization-log
kind = identification
dist = lognormal(0.3,1)
ident = mean@realization:log
functional = mean
g = log
bracket = -1.5,2
points = 41

[check]
name = identification/quantile-negate-exponential
kind = identification
dist = exponential(1)
ident = quantile:tau=0.25@both:negate
functional = quantile:tau=0.75
bracket = 0.3,3
points = 41

[check]
name = identification/mean-power2-lognormal
kind = identification
dist = lognormal(0,1)
ident = mean@both:power(2)
functional = gmean:g=power(2)
bracket = 1,5
points = 41

[check]
name = identification/median-exp-normal
kind = identification
dist = normal(0,1)
ident = quantile:tau=0.5@both:exp
functional = quantile:tau=0.5
bracket = -2,2
points = 41

# dS/dz = h(z) V(z, y) for the built-in pairings.
[check]
name = osband/se-mean
kind = osband
dist = normal(0,1)
score = se
ident = mean

[check]
name = osband/se-mean-log
kind = osband
dist = lognormal(0,1)
score = se@both:log
ident = mean@both:log

[check]
name = osband/bregman-exp-mean
kind = osband
dist = normal(0,1)
score = bregman:phi=exp
ident = mean

[check]
name = osband/gpl-log-quantile
kind = osband
dist = lognormal(0,1)
score = gpl:tau=0.9:g=log
ident = quantile:tau=0.9

[check]
name = osband/expectile-square
kind = osband
dist = normal(0,1)
score = expectile:tau=0.75:phi=square
ident = expectile:tau=0.75

# Mean-variance score with realizations transformed by log.
[check]
name = mean-variance/log-lognormal
kind = pair
dist = lognormal(0.5,2)
score = mv@realization:log
functional = mvpair:g=log
bracket = -0.5,1.5
bracket2 = 2,6
tol_abs = 0
tol_rel = 0.03

[check]
name = strictness/se-normal
kind = strictness
dist = normal(0,1)
score = se
bracket = -2,2

[check]
name = strictness/expectile-uniform
kind = strictness
dist = uniform(0,1)
score = expectile:tau=0.75:phi=square
bracket = 0.05,0.95

# The median of an even two-point sample is a whole interval.
[check]
name = strictness/median-flat
kind = strictness
dist = empirical(1,1,2,2)
score = gpl:tau=0.5
n = 1e5
bracket = 0,3
expect = fail
)";

std::vector<double> parse_list(std::string_view s, std::string_view what) {
    std::vector<double> out;
    for (auto part : text::split_top(s, ',')) {
        out.push_back(text::parse_double(text::trim(part), what));
    }
    return out;
}

Bracket parse_bracket(std::string_view s, std::string_view what) {
    const auto v = parse_list(s, what);
    if (v.size() != 2) {
        throw ParseError(std::string(what) + " needs two values lo,hi");
    }
    return Bracket(v[0], v[1]);
}

void assign(CheckConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "name") {
        cfg.name = std::string(value);
    } else if (key == "kind") {
        cfg.kind = parse_check_kind(value);
    } else if (key == "dist") {
        cfg.dist = parse_distribution(value);
    } else if (key == "score") {
        cfg.score = parse_score_spec(value);
    } else if (key == "other") {
        cfg.other_score = parse_score_spec(value);
    } else if (key == "ident") {
        cfg.ident = parse_ident_spec(value);
    } else if (key == "functional") {
        cfg.functional = parse_functional_spec(value);
    } else if (key == "g") {
        cfg.g = parse_bijection(value);
    } else if (key == "n") {
        cfg.n = text::parse_count(value, "n");
    } else if (key == "seed") {
        cfg.seed = Seed{text::parse_u64(value, "seed")};
    } else if (key == "bracket") {
        cfg.bracket = parse_bracket(value, "bracket");
    } else if (key == "bracket2") {
        cfg.bracket2 = parse_bracket(value, "bracket2");
    } else if (key == "points") {
        cfg.points = text::parse_count(value, "points");
    } else if (key == "pair_points") {
        cfg.pair_points = text::parse_count(value, "pair_points");
    } else if (key == "tol_abs") {
        cfg.tol_abs = text::parse_double(value, "tol_abs");
    } else if (key == "tol_rel") {
        cfg.tol_rel = text::parse_double(value, "tol_rel");
    } else if (key == "offsets") {
        cfg.offsets = parse_list(value, "offsets");
    } else if (key == "target") {
        cfg.target_override = parse_list(value, "target");
    } else if (key == "osband_points") {
        cfg.osband_points = text::parse_count(value, "osband_points");
    } else if (key == "expect") {
        if (value != "pass" && value != "fail") {
            throw ParseError("expect must be pass or fail");
        }
        cfg.expect_pass = value == "pass";
    } else {
        throw ParseError("unknown key '" + std::string(key) + "'");
    }
}

void validate(const CheckConfig& cfg) {
    std::vector<std::string_view> missing;
    const auto need = [&](bool present, std::string_view key) {
        if (!present) {
            missing.push_back(key);
        }
    };
    const bool has_target = cfg.functional || cfg.target_override;
    need(cfg.dist.has_value(), "dist");
    switch (cfg.kind) {
        case CheckKind::consistency:
            need(cfg.score.has_value(), "score");
            need(has_target, "functional");
            need(cfg.bracket.has_value(), "bracket");
            break;
        case CheckKind::strictness:
            need(cfg.score.has_value(), "score");
            need(cfg.bracket.has_value(), "bracket");
            break;
        case CheckKind::identification:
            need(cfg.ident.has_value(), "ident");
            need(has_target, "functional");
            break;
        case CheckKind::revelation:
        case CheckKind::realization:
            need(cfg.score.has_value(), "score");
            need(has_target, "functional");
            need(cfg.g.has_value(), "g");
            need(cfg.bracket.has_value(), "bracket");
            break;
        case CheckKind::pair:
            need(cfg.score.has_value(), "score");
            need(has_target, "functional");
            need(cfg.bracket.has_value(), "bracket");
            need(cfg.bracket2.has_value(), "bracket2");
            break;
        case CheckKind::agreement:
            need(cfg.score.has_value(), "score");
            need(cfg.other_score.has_value(), "other");
            need(cfg.bracket.has_value(), "bracket");
            break;
        case CheckKind::osband:
            need(cfg.score.has_value(), "score");
            need(cfg.ident.has_value(), "ident");
            break;
    }
    if (!missing.empty()) {
        std::string keys;
        for (auto k : missing) {
            keys += (keys.empty() ? "" : ", ") + std::string(k);
        }
        throw ParseError("check '" + cfg.name + "' is missing: " + keys);
    }
}

}  // namespace

std::vector<CheckConfig> parse_suite(std::string_view text) {
    std::vector<CheckConfig> configs;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::size_t block_line = 0;
    const auto close_block = [&] {
        if (configs.empty()) {
            return;
        }
        auto& cfg = configs.back();
        if (cfg.name.empty()) {
            cfg.name = "check-" + std::to_string(configs.size() - 1);
        }
        try {
            validate(cfg);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(block_line) + ": " + e.what());
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto view = std::string_view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = text::trim(view);
        if (view.empty()) {
            continue;
        }
        if (view == "[check]") {
            close_block();
            configs.emplace_back();
            block_line = line_no;
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        }
        if (configs.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": key outside a [check] block");
        }
        try {
            assign(configs.back(), text::trim(view.substr(0, eq)), text::trim(view.substr(eq + 1)));
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    close_block();
    return configs;
}

std::optional<std::string_view> builtin_suite(std::string_view name) {
    if (name == "paper-core") {
        return core_suite;
    }
    return std::nullopt;
}

}  // namespace elicit
