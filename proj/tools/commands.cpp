#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "elicit/csv.hpp"
#include "elicit/distributions.hpp"
#include "elicit/error.hpp"
#include "elicit/estimation.hpp"
#include "elicit/evaluation.hpp"
#include "elicit/identification.hpp"
#include "elicit/scoring.hpp"
#include "elicit/text.hpp"
#include "elicit/transforms.hpp"
#include "elicit/verify.hpp"

namespace elicit::cli {

namespace {

using nlohmann::ordered_json;

struct FunctionalInfo {
    const char* name;
    const char* encoding;
};

constexpr FunctionalInfo functional_rows[] = {
    {"mean", "mean"},
    {"quantile", "quantile:tau=T"},
    {"expectile", "expectile:tau=T"},
    {"g-transformed expectation", "gmean:g=G"},
    {"g-transformed expectile", "gexpectile:tau=T:g=G"},
    {"mean-variance pair of g(y)", "mvpair[:g=G]"},
};

ordered_json catalog_json(const std::string& family) {
    ordered_json out = ordered_json::array();
    const bool all = family == "all";
    if (all || family == "bijections") {
        for (const auto& r : catalog_rows()) {
            out.push_back({{"kind", "bijection"},
                           {"name", r.name},
                           {"params", r.params},
                           {"constraint", r.constraint},
                           {"g", r.formula},
                           {"inverse", r.inverse},
                           {"domain", r.domain},
                           {"functional", r.functional}});
        }
    }
    if (all || family == "scores") {
        for (const auto& f : score_families()) {
            out.push_back({{"kind", "score"},
                           {"name", f.name},
                           {"encoding", f.encoding},
                           {"formula", f.formula}});
        }
    }
    if (all || family == "identifications") {
        for (const auto& f : ident_families()) {
            out.push_back({{"kind", "identification"},
                           {"name", f.name},
                           {"encoding", f.encoding},
                           {"formula", f.formula}});
        }
    }
    if (all || family == "functionals") {
        for (const auto& f : functional_rows) {
            out.push_back({{"kind", "functional"}, {"name", f.name}, {"encoding", f.encoding}});
        }
    }
    return out;
}

void print_catalog_text(std::ostream& out, const ordered_json& rows) {
    std::string section;
    for (const auto& row : rows) {
        const auto kind = row["kind"].get<std::string>();
        if (kind != section) {
            out << (section.empty() ? "" : "\n") << kind << "s\n";
            section = kind;
        }
        if (kind == "bijection") {
            out << "  " << row["name"].get<std::string>();
            if (!row["params"].get<std::string>().empty()) {
                out << "(" << row["params"].get<std::string>() << ")";
            }
            out << "  g(t) = " << row["g"].get<std::string>() << "  on " << row["domain"].get<std::string>();
            if (!row["constraint"].get<std::string>().empty()) {
                out << "  [" << row["constraint"].get<std::string>() << "]";
            }
            out << "  elicits " << row["functional"].get<std::string>() << "\n";
        } else {
            out << "  " << row["encoding"].get<std::string>() << "  " << row["name"].get<std::string>();
            if (row.contains("formula")) {
                out << "  " << row["formula"].get<std::string>();
            }
            out << "\n";
        }
    }
}

ordered_json number_or_list(const std::vector<double>& v) {
    if (v.empty()) {
        return nullptr;
    }
    if (v.size() == 1) {
        return v.front();
    }
    return v;
}

ordered_json report_json(const VerificationReport& r, bool timing) {
    ordered_json j;
    j["check"] = r.check;
    j["kind"] = std::string(to_string(r.kind));
    j["pass"] = r.pass;
    j["expected"] = r.expect_pass;
    j["estimate"] = number_or_list(r.estimate);
    j["target"] = number_or_list(r.target);
    j["stderr"] = number_or_list(r.std_error);
    j["tol_abs"] = r.tol_abs;
    j["tol_rel"] = r.tol_rel;
    j["seed"] = r.seed;
    j["ms"] = timing ? ordered_json(r.ms) : ordered_json(nullptr);
    j["notes"] = r.notes;
    return j;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw ParseError("cannot write '" + path + "'");
    }
    file << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ELICIT_SEED")) {
        return text::parse_u64(env, "ELICIT_SEED");
    }
    return 42;
}

Bracket parse_bracket_arg(const std::string& s) {
    const auto parts = text::split_top(s, ',');
    if (parts.size() != 2) {
        throw ParseError("bracket needs lo,hi");
    }
    return Bracket(text::parse_double(parts[0], "bracket lo"), text::parse_double(parts[1], "bracket hi"));
}

struct ScoreArgs {
    std::string score;
    std::string data;
    std::string skill;
    std::string out;
};

int cmd_score(const ScoreArgs& a, std::ostream& out) {
    const auto spec = parse_score_spec(a.score);
    const auto table = read_csv_file(a.data);
    const auto& y = table.column("y");
    const auto& z = table.column("z");
    ordered_json j;
    j["score"] = spec.to_string();
    j["n"] = y.size();
    if (spec.is_pair()) {
        const auto& x2 = table.column("x2");
        std::vector<MeanVarPrediction> x(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            x[i] = {z[i], x2[i]};
        }
        j["average"] = average_score(spec, x, y);
        if (!a.skill.empty()) {
            throw PreconditionError("skill scores need a scalar score family");
        }
    } else {
        j["average"] = average_score(spec, z, y);
        if (!a.skill.empty()) {
            double ref = 0.0;
            if (a.skill == "climatology") {
                ref = climatology(y);
            } else if (a.skill == "g-climatology") {
                ref = transformed_climatology(spec.mode().g(), y);
            } else {
                throw ParseError("--skill must be climatology or g-climatology");
            }
            const std::vector<double> reference(y.size(), ref);
            j["reference"] = ref;
            j["skill"] = skill_score(spec, z, reference, ZeroOptimum{}, y);
        }
    }
    emit(j.dump(2) + "\n", a.out, out);
    return ok;
}

struct FitArgs {
    std::string model;
    std::string score;
    std::string data;
    std::string out;
    double tol = 1e-10;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto model = parse_model_kind(a.model);
    const auto spec = parse_score_spec(a.score);
    const auto table = read_csv_file(a.data);
    const auto& y = table.column("y");
    std::vector<double> x;
    if (model == ModelKind::linear) {
        x = table.column("x");
    }
    const auto r = fit(model, spec, x, y, std::nullopt, a.tol);
    ordered_json j;
    j["model"] = std::string(to_string(model));
    j["score"] = spec.to_string();
    j["theta"] = std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
    j["objective"] = r.objective;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    emit(j.dump(2) + "\n", a.out, out);
    return ok;
}

struct VerifyArgs {
    std::string suite;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string out;
    bool timing = false;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    std::string text;
    if (a.suite.starts_with("builtin:")) {
        const auto name = std::string_view(a.suite).substr(8);
        const auto builtin = builtin_suite(name);
        if (!builtin) {
            throw ParseError("unknown built-in suite '" + std::string(name) + "'");
        }
        text = *builtin;
    } else {
        text = read_text(a.suite);
    }
    const auto configs = parse_suite(text);
    const auto reports = run_suite(configs, Seed{a.seed}, a.jobs);
    ordered_json j = ordered_json::array();
    bool all_as_expected = true;
    for (const auto& r : reports) {
        j.push_back(report_json(r, a.timing));
        all_as_expected = all_as_expected && r.as_expected();
        err << (r.pass ? "PASS " : "FAIL ") << r.check << (r.as_expected() ? "" : "  (unexpected)")
            << "\n";
    }
    emit(j.dump(2) + "\n", a.out, out);
    return all_as_expected ? ok : verification_failed;
}

struct CurveArgs {
    std::string score;
    std::string dist;
    std::string bracket;
    std::size_t points = 201;
    std::size_t n = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_curve(const CurveArgs& a, std::ostream& out) {
    const auto spec = parse_score_spec(a.score);
    if (spec.is_pair()) {
        throw PreconditionError("curve needs a scalar score family");
    }
    const auto d = parse_distribution(a.dist);
    const auto rows = expected_score_curve(spec, d, parse_bracket_arg(a.bracket), a.points, a.n, Seed{a.seed});
    std::vector<std::vector<double>> cols(3);
    for (const auto& r : rows) {
        cols[0].push_back(r.z);
        cols[1].push_back(r.escore);
        cols[2].push_back(r.std_error);
    }
    const std::vector<std::string> names{"z", "escore", "stderr"};
    std::ostringstream s;
    write_csv(s, names, cols);
    emit(s.str(), a.out, out);
    return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"consistent scoring functions, identification functions and their verification"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string family = "all";
    auto* catalog = app.add_subcommand("catalog", "list transforms, scores, identification functions and functionals");
    catalog->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    catalog->add_option("--family", family)
        ->check(CLI::IsMember({"all", "bijections", "scores", "identifications", "functionals"}));

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "average score (and skill) of predictions in a CSV file");
    score->add_option("--score", score_args.score)->required();
    score->add_option("--data", score_args.data, "CSV with columns y, z (and x2 for mv)")->required();
    score->add_option("--skill", score_args.skill)->check(CLI::IsMember({"climatology", "g-climatology"}));
    score->add_option("--out", score_args.out);

    FitArgs fit_args;
    auto* fitc = app.add_subcommand("fit", "M-estimation of a constant, linear or mean-variance model");
    fitc->add_option("--model", fit_args.model)->required()->check(CLI::IsMember({"constant", "linear", "mvpair"}));
    fitc->add_option("--score", fit_args.score)->required();
    fitc->add_option("--data", fit_args.data, "CSV with column y (and x for linear)")->required();
    fitc->add_option("--tol", fit_args.tol);
    fitc->add_option("--out", fit_args.out);

    VerifyArgs verify_args;
    std::string verify_seed;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", verify_args.suite, "suite file or builtin:NAME")->required();
    verify->add_option("--seed", verify_seed);
    verify->add_option("--jobs", verify_args.jobs)->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_args.out);
    verify->add_flag("--timing", verify_args.timing, "record wall time per check (ms)");

    CurveArgs curve_args;
    std::string curve_seed;
    auto* curve = app.add_subcommand("curve", "expected score on a grid, as CSV z,escore,stderr");
    curve->add_option("--score", curve_args.score)->required();
    curve->add_option("--dist", curve_args.dist)->required();
    curve->add_option("--bracket", curve_args.bracket)->required();
    curve->add_option("--points", curve_args.points)->check(CLI::Range(3, 1000000));
    curve->add_option("--n", curve_args.n)->check(CLI::Range(2, 100000000));
    curve->add_option("--seed", curve_seed);
    curve->add_option("--out", curve_args.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*catalog) {
            const auto rows = catalog_json(family);
            if (format == "json") {
                out << rows.dump(2) << "\n";
            } else {
                print_catalog_text(out, rows);
            }
            return ok;
        }
        if (*score) {
            return cmd_score(score_args, out);
        }
        if (*fitc) {
            return cmd_fit(fit_args, out);
        }
        if (*verify) {
            verify_args.seed = verify_seed.empty() ? default_seed() : text::parse_u64(verify_seed, "--seed");
            return cmd_verify(verify_args, out, err);
        }
        if (*curve) {
            curve_args.seed = curve_seed.empty() ? default_seed() : text::parse_u64(curve_seed, "--seed");
            return cmd_curve(curve_args, out);
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return numeric_error;
    }
    return usage_error;
}

}  // namespace elicit::cli
