#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/config.hpp"
#include "pgg/dataframe.hpp"
#include "pgg/econometrics.hpp"
#include "pgg/hypotheses.hpp"
#include "pgg/report.hpp"
#include "pgg/simulator.hpp"
#include "pgg/solver.hpp"

#ifndef PGG_VERSION
#define PGG_VERSION "0.0.0"
#endif

namespace pgg::cli {

inline constexpr const char* version = PGG_VERSION;
inline constexpr const char* out_dir_env = "PGG_OUT_DIR";

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, numerical_failure = 3, cap_exceeded = 4 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"curve", "solve", "sweep", "hypotheses", "simulate", "analyze", "power"};
    return c;
}

struct RunConfig {
    std::string command;
    std::optional<std::uint64_t> seed;
    Rational alpha{1};
    std::optional<nlohmann::json> utility; ///< UtilityFn JSON; risk neutral when unset
    GameSpec game;
    FilterMode mode = FilterMode::paper;
    std::vector<AmbiguityScenario> scenarios = canonical_scenarios();
    RhoSweep sweep;
    std::uint64_t profile_cap = default_profile_cap;
    ExperimentConfig experiment;

    // analyze
    std::string input;
    std::map<std::string, std::string> column_map;
    std::string baseline = "RR";
    std::size_t permutations = 2000;

    // power
    int arms = 4;
    std::optional<double> n_total;
    std::optional<double> sd;
    double alpha_level = 0.05;
    double power = 0.8;
    std::size_t mc_replications = 0;

    // Not part of the configuration identity.
    unsigned workers = 1;
    std::string out;
    std::string histogram_out;
    std::string regressions_out;

    UtilityFn utility_fn() const { return utility ? UtilityFn::from_json(*utility) : UtilityFn::risk_neutral(); }
};

// --- JSON ---------------------------------------------------------------

namespace detail {

using pgg::detail::check_keys;
using pgg::detail::get_number;
using pgg::detail::get_string;

inline std::uint64_t get_uint(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw InvalidInput(where + ": expected a non-negative integer");
}

inline FilterMode parse_mode(const std::string& s, const std::string& where) {
    try {
        return parse_filter_mode(s);
    } catch (const InvalidInput&) {
        throw InvalidInput(where + ": expected raw or paper, got '" + s + "'");
    }
}

inline nlohmann::json scenario_json(const AmbiguityScenario& s) {
    if (s == make_scenario(s.label)) return to_string(s.label);
    return to_json(s);
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace detail

/// Builds a configuration from a JSON object. Top-level `n`, `resolution`,
/// `rule` and `grid_step` are shortcuts that land in the experiment too.
inline RunConfig config_from_json(const nlohmann::json& j) {
    using namespace detail;
    check_keys(j, "config",
               {"command", "seed", "alpha", "rho", "utility", "grid_step", "mode", "scenarios", "sweep", "profile_cap",
                "experiment", "n", "resolution", "rule", "input", "column_map", "baseline", "permutations", "arms",
                "sd", "alpha_level", "power", "mc_replications", "workers", "out", "histogram", "regressions"});
    RunConfig c;
    if (j.contains("command")) {
        c.command = get_string(j.at("command"), "command");
        if (std::find(commands().begin(), commands().end(), c.command) == commands().end())
            throw InvalidInput("command: unknown command '" + c.command + "'");
    }
    if (j.contains("seed")) c.seed = get_uint(j.at("seed"), "seed");
    if (j.contains("alpha")) {
        c.alpha = pgg::detail::get_rational(j.at("alpha"), "alpha");
        if (c.alpha < Rational(0) || c.alpha > Rational(1)) throw InvalidInput("alpha: must lie in [0,1]");
    }
    if (j.contains("utility") && j.contains("rho")) throw InvalidInput("rho: give either rho or utility, not both");
    if (j.contains("utility")) {
        c.utility = j.at("utility");
        try {
            (void)UtilityFn::from_json(*c.utility);
        } catch (const InvalidInput& e) {
            throw InvalidInput(std::string("utility: ") + e.what());
        }
    }
    if (j.contains("rho")) {
        const double rho = get_number(j.at("rho"), "rho");
        if (!(rho > 0)) throw InvalidInput("rho: must be positive");
        c.utility = UtilityFn::power(rho).to_json();
    }
    if (j.contains("experiment")) apply_experiment_json(c.experiment, j.at("experiment"), "experiment");
    if (j.contains("grid_step")) {
        c.game.grid_step = pgg::detail::get_money(j.at("grid_step"), "grid_step");
        c.experiment.game.grid_step = c.game.grid_step;
    } else {
        c.game.grid_step = c.experiment.game.grid_step;
    }
    try {
        c.game.validate();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("grid_step: ") + e.what());
    }
    if (j.contains("mode")) c.mode = parse_mode(get_string(j.at("mode"), "mode"), "mode");
    if (j.contains("scenarios")) {
        const auto& s = j.at("scenarios");
        if (!s.is_array() || s.empty()) throw InvalidInput("scenarios: expected a non-empty array");
        c.scenarios.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string where = "scenarios[" + std::to_string(i) + "]";
            try {
                c.scenarios.push_back(s[i].is_string() ? make_scenario(s[i].get<std::string>()) : scenario_from_json(s[i]));
            } catch (const InvalidInput& e) {
                throw InvalidInput(where + ": " + e.what());
            }
            for (std::size_t k = 0; k + 1 < c.scenarios.size(); ++k)
                if (c.scenarios[k].label == c.scenarios.back().label)
                    throw InvalidInput(where + ": duplicate label " + to_string(c.scenarios.back().label));
        }
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_keys(s, "sweep", {"lo", "hi", "samples"});
        if (s.contains("lo")) c.sweep.lo = get_number(s.at("lo"), "sweep.lo");
        if (s.contains("hi")) c.sweep.hi = get_number(s.at("hi"), "sweep.hi");
        if (s.contains("samples")) c.sweep.samples = get_uint(s.at("samples"), "sweep.samples");
        try {
            (void)log_spaced(c.sweep.lo, c.sweep.hi, c.sweep.samples);
        } catch (const InvalidInput& e) {
            throw InvalidInput(std::string("sweep: ") + e.what());
        }
    }
    if (j.contains("profile_cap")) c.profile_cap = get_uint(j.at("profile_cap"), "profile_cap");
    if (j.contains("n")) {
        const double n = get_number(j.at("n"), "n");
        if (!(n > 0) || n != std::floor(n)) throw InvalidInput("n: expected a positive integer");
        c.n_total = n;
        c.experiment.n_subjects = static_cast<std::size_t>(n);
    }
    if (j.contains("resolution")) {
        const auto r = get_string(j.at("resolution"), "resolution");
        try {
            c.experiment.resolution = parse_resolution_policy(r);
        } catch (const InvalidInput&) {
            throw InvalidInput("resolution: expected uniform, pessimistic or optimistic, got '" + r + "'");
        }
    }
    if (j.contains("rule")) {
        const auto& r = j.at("rule");
        if (r.is_string()) {
            try {
                c.experiment.rule.kind = parse_rule_kind(r.get<std::string>());
            } catch (const InvalidInput& e) {
                throw InvalidInput(std::string("rule: ") + e.what());
            }
        } else {
            c.experiment.rule = rule_from_json(r, "rule", c.experiment.rule);
        }
    }
    if (j.contains("input")) c.input = get_string(j.at("input"), "input");
    if (j.contains("column_map")) {
        const auto& m = j.at("column_map");
        if (!m.is_object()) throw InvalidInput("column_map: expected an object of source -> name");
        for (const auto& [k, v] : m.items()) c.column_map[k] = get_string(v, "column_map." + k);
    }
    if (j.contains("baseline")) {
        c.baseline = get_string(j.at("baseline"), "baseline");
        try {
            (void)parse_treatment(c.baseline);
        } catch (const InvalidInput&) {
            throw InvalidInput("baseline: unknown arm '" + c.baseline + "'");
        }
    }
    if (j.contains("permutations")) c.permutations = get_uint(j.at("permutations"), "permutations");
    if (j.contains("arms")) {
        const auto a = get_uint(j.at("arms"), "arms");
        if (a < 2 || a > 1000) throw InvalidInput("arms: expected an integer >= 2");
        c.arms = static_cast<int>(a);
    }
    if (j.contains("sd")) {
        c.sd = get_number(j.at("sd"), "sd");
        if (!(*c.sd > 0)) throw InvalidInput("sd: must be positive");
    }
    if (j.contains("alpha_level")) {
        c.alpha_level = get_number(j.at("alpha_level"), "alpha_level");
        if (!(c.alpha_level > 0 && c.alpha_level < 1)) throw InvalidInput("alpha_level: must lie in (0,1)");
    }
    if (j.contains("power")) {
        c.power = get_number(j.at("power"), "power");
        if (!(c.power > 0 && c.power < 1)) throw InvalidInput("power: must lie in (0,1)");
    }
    if (j.contains("mc_replications")) c.mc_replications = get_uint(j.at("mc_replications"), "mc_replications");
    if (j.contains("workers")) {
        const auto w = get_uint(j.at("workers"), "workers");
        if (w == 0 || w > 1024) throw InvalidInput("workers: expected an integer in [1, 1024]");
        c.workers = static_cast<unsigned>(w);
    }
    if (j.contains("out")) c.out = get_string(j.at("out"), "out");
    if (j.contains("histogram")) c.histogram_out = get_string(j.at("histogram"), "histogram");
    if (j.contains("regressions")) c.regressions_out = get_string(j.at("regressions"), "regressions");
    c.experiment.workers = c.workers;
    return c;
}

/// Identity of a run: only the fields the command reads. Output paths and
/// the worker count are left out since they never change the bytes.
inline nlohmann::json canonical_json(const RunConfig& c) {
    nlohmann::json j{{"command", c.command}};
    auto scenarios = [&] {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& s : c.scenarios) a.push_back(detail::scenario_json(s));
        return a;
    };
    auto sweep = [&] { return nlohmann::json{{"lo", c.sweep.lo}, {"hi", c.sweep.hi}, {"samples", c.sweep.samples}}; };
    const auto& cmd = c.command;
    if (cmd == "curve" || cmd == "solve" || cmd == "sweep" || cmd == "hypotheses") {
        j["alpha"] = c.alpha.to_string();
        j["grid_step"] = c.game.grid_step.to_string();
    }
    if (cmd == "curve" || cmd == "solve" || cmd == "sweep") j["scenarios"] = scenarios();
    if (cmd == "sweep" || cmd == "hypotheses") j["sweep"] = sweep();
    if (cmd == "solve") {
        j["utility"] = c.utility_fn().to_json();
        j["mode"] = c.mode == FilterMode::raw ? "raw" : "paper";
        if (c.mode == FilterMode::raw) j["profile_cap"] = c.profile_cap;
    }
    if (cmd == "simulate") {
        if (c.seed) j["seed"] = *c.seed;
        j["experiment"] = to_json(c.experiment);
    }
    if (cmd == "analyze") {
        j["seed"] = c.seed.value_or(1);
        j["input"] = c.input;
        j["column_map"] = c.column_map;
        j["baseline"] = c.baseline;
        j["permutations"] = c.permutations;
    }
    if (cmd == "power") {
        j["arms"] = c.arms;
        if (c.n_total) j["n"] = *c.n_total;
        if (c.sd) j["sd"] = *c.sd;
        j["alpha_level"] = c.alpha_level;
        j["power"] = c.power;
        j["mc_replications"] = c.mc_replications;
        if (c.mc_replications > 0) j["seed"] = c.seed.value_or(1);
    }
    return j;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string config_hash(const RunConfig& c) { return detail::hex64(fnv1a64(canonical_json(c).dump())); }

/// Two comment lines that open every artifact file.
inline std::string artifact_header(const RunConfig& c) {
    const auto canon = canonical_json(c);
    std::string seed = canon.contains("seed") ? std::to_string(canon.at("seed").get<std::uint64_t>()) : "none";
    return "# pgg " + c.command + " version=" + version + " seed=" + seed +
           " config_hash=" + detail::hex64(fnv1a64(canon.dump())) + "\n# config: " + canon.dump() + "\n";
}

/// Reads a JSON config, or the embedded config of an artifact file (the
/// "# config:" header line).
inline nlohmann::json parse_config_text(const std::string& text, const std::string& source) {
    std::size_t i = text.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && text[i] == '#') {
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) {
            if (line.rfind("# config: ", 0) == 0) {
                try {
                    return nlohmann::json::parse(line.substr(10));
                } catch (const nlohmann::json::parse_error& e) {
                    throw InvalidInput(source + ": malformed config header: " + e.what());
                }
            }
            if (line.empty() || line[0] != '#') break;
        }
        throw InvalidInput(source + ": no '# config:' header line");
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(source + ": " + e.what());
    }
}

inline nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

// --- commands -------------------------------------------------------------

struct Output {
    std::string report;   ///< human-readable
    std::string artifact; ///< file content, header excluded
    std::string extension;
    std::vector<std::pair<std::string, std::string>> extra; ///< (path, content) side artifacts
};

namespace detail {

inline std::string curve_csv(const std::vector<AmbiguityScenario>& scenarios, Rational alpha, const GameSpec& game) {
    std::string out = "treatment,alpha,from,to,prob\n";
    for (const auto& s : scenarios) {
        const auto curve = build_success_curve(s, alpha, game);
        const auto& st = curve.steps();
        for (std::size_t i = 0; i < st.size(); ++i) {
            const Money to = i + 1 < st.size() ? st[i + 1].from : curve.upper_bound();
            out += to_string(s.label) + "," + alpha.to_string() + "," + st[i].from.to_string() + "," + to.to_string() +
                   "," + st[i].prob.to_string() + "\n";
        }
    }
    return out;
}

inline Output run_curve(const RunConfig& c) {
    Output o{"", curve_csv(c.scenarios, c.alpha, c.game), "csv", {}};
    for (const auto& s : c.scenarios) {
        const auto curve = build_success_curve(s, c.alpha, c.game);
        o.report += to_string(s.label) + ": " + describe(curve) + "\n";
    }
    if (!c.scenarios.empty() && build_success_curve(c.scenarios.front(), c.alpha, c.game).is_alpha_extension())
        o.report += "(alpha = " + c.alpha.to_string() + " mixes the maxmin and maxmax curves)\n";
    return o;
}

inline Output run_solve(const RunConfig& c) {
    const auto u = c.utility_fn();
    Output o{"", records_csv_header(), "csv", {}};
    EquilibriumTable table;
    table.columns.clear();
    for (const auto& s : c.scenarios) {
        const auto curve = build_success_curve(s, c.alpha, c.game);
        table.columns.push_back(s.label);
        if (c.mode == FilterMode::paper) {
            const auto recs = enumerate_symmetric(curve, u, c.game, FilterMode::paper);
            for (const auto& r : recs) table.totals[s.label].push_back(r.total);
            o.artifact += records_csv_rows(s.label, recs);
        } else {
            const auto recs = enumerate_all_profiles(curve, u, c.game, c.profile_cap, c.workers);
            std::size_t strict = 0, symmetric = 0;
            for (const auto& r : recs) {
                strict += r.kind == EqKind::strict;
                symmetric += r.profile.is_symmetric();
                if (r.profile.is_symmetric() && passes_paper_filter(r) && is_canonical_total(r.total))
                    table.totals[s.label].push_back(r.total);
            }
            o.report += to_string(s.label) + ": " + std::to_string(recs.size()) + " pure equilibria (" +
                        std::to_string(strict) + " strict, " + std::to_string(symmetric) + " symmetric)\n";
            o.artifact += records_csv_rows(s.label, recs);
        }
    }
    o.report += table.render_text();
    return o;
}

inline Output run_sweep(const RunConfig& c) {
    const auto t = robust_table(c.scenarios, c.alpha, c.sweep, c.game);
    Output o{"", t.render_csv(), "csv", {}};
    o.report = "equilibria for every u(x) = x^rho, rho in [" + format_rho(c.sweep.lo) + ", " + format_rho(c.sweep.hi) +
               "], " + std::to_string(c.sweep.samples) + " log-spaced values, alpha = " + c.alpha.to_string() + "\n" +
               t.render_text();
    return o;
}

inline Output run_hypotheses(const RunConfig& c) {
    const auto text = hypothesis_report(c.alpha, c.sweep, c.game).render_text();
    return {text, text, "txt", {}};
}

inline std::string summary_text(const DatasetSummary& s) {
    return "subjects: " + std::to_string(s.n) + "\nmean contribution: " + fixed(s.mean_contribution) +
           " (sd " + fixed(s.sd_contribution) + ")\nshare below 2: " + fixed(s.share_below) +
           ", at 2: " + fixed(s.share_at) + ", above 2: " + fixed(s.share_above) +
           "\nmean belief: " + fixed(s.mean_belief) + "\ngroup success rate: " + fixed(s.success_rate) +
           "\nmean earnings: " + fixed(s.mean_earnings) + "\n";
}

inline Output run_simulate(const RunConfig& c) {
    if (!c.seed) throw InvalidInput("seed: required for simulate");
    ExperimentConfig ex = c.experiment;
    ex.workers = c.workers;
    ex.validate();
    const auto records = run_experiment(ex, *c.seed);
    std::ostringstream csv;
    write_records_csv(csv, records);
    return {summary_text(summarize(records)), csv.str(), "csv", {}};
}

inline bool has_terms(const DataFrame& f, const std::vector<std::string>& terms) {
    for (const auto& t : terms)
        for (const auto& part : pgg::detail::split_term(t)) {
            if (f.has_numeric(part)) continue;
            bool arm = f.has_string("treatment");
            try {
                (void)parse_treatment(part);
            } catch (const InvalidInput&) {
                arm = false;
            }
            if (!arm) return false;
        }
    return true;
}

/// Rewrites a model's arm terms for the data at hand: one copy per arm
/// present other than the baseline, in place of the default AR/RA/AA set.
inline std::vector<std::string> adapt_arms(const std::vector<std::string>& terms, const std::vector<std::string>& present,
                                           const std::string& baseline) {
    const std::string lead = arm_dummies().front();
    std::vector<std::string> out;
    for (const auto& t : terms) {
        auto parts = pgg::detail::split_term(t);
        auto it = std::find_if(parts.begin(), parts.end(), [](const std::string& p) {
            return std::any_of(all_treatments.begin(), all_treatments.end(), [&](Treatment a) { return to_string(a) == p; });
        });
        if (it == parts.end()) {
            out.push_back(t);
            continue;
        }
        if (*it != lead) continue;
        for (auto a : all_treatments) {
            const auto label = to_string(a);
            if (label == baseline || std::find(present.begin(), present.end(), label) == present.end()) continue;
            *it = label;
            std::string term;
            for (std::size_t i = 0; i < parts.size(); ++i) term += (i ? "*" : "") + parts[i];
            out.push_back(term);
        }
    }
    return out;
}

inline Output run_analyze(const RunConfig& c) {
    if (c.input.empty()) throw InvalidInput("input: analyze needs a dataset CSV");
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw InvalidInput("input: cannot open " + c.input);
    const DataFrame f = read_csv_frame(in, c.column_map);
    if (!f.has_string("treatment")) throw InvalidInput("input: no treatment column");
    if (!f.has_numeric("contribution")) throw InvalidInput("input: no numeric contribution column");

    std::string rep = "observations: " + std::to_string(f.rows()) + "\n";
    std::vector<RegressionResult> all;
    std::vector<std::string> all_labels;
    auto section = [&](const std::string& title, const std::vector<RegressionResult>& cols,
                       const std::vector<std::string>& labels) {
        if (cols.empty()) return;
        rep += "\n== " + title + " ==\n" + render_regression_text(cols, labels);
        all.insert(all.end(), cols.begin(), cols.end());
        for (const auto& l : labels) all_labels.push_back(title + " " + l);
    };

    std::vector<std::string> covs;
    for (const auto& cov : balance_covariates())
        if (f.has_numeric(cov)) covs.push_back(cov);
    const auto arms = arms_present(f);
    if (arms.size() >= 2 && !covs.empty())
        rep += "\n== Balance (Welch p-values against " + c.baseline + ") ==\n" +
               render_balance_text(balance_table(f, covs, c.baseline));

    if (arms.size() >= 2) {
        const auto ate = ate_report(f, "contribution", c.baseline);
        rep += "\n== Treatment effects on contribution (baseline " + c.baseline + ") ==\n";
        for (const auto& e : ate.effects)
            rep += e.arm + ": " + fixed(e.estimate) + stars(e.p) + " (" + fixed(e.se) + "), p = " + fixed(e.p, 4) + "\n";
    }

    auto model = [&](std::vector<std::string> terms) { return adapt_arms(terms, arms, c.baseline); };

    std::vector<RegressionResult> contrib;
    std::vector<std::string> labels;
    for (int k = 1; k <= 5; ++k)
        if (has_terms(f, contribution_spec(k))) {
            contrib.push_back(regress(f, "contribution", model(contribution_spec(k))));
            labels.push_back("(" + std::to_string(k) + ")");
        }
    section("Contribution", contrib, labels);

    std::vector<RegressionResult> inter;
    labels.clear();
    for (const std::string m : {"risk_aversion", "ambiguity_aversion"})
        if (f.has_numeric(m) && has_terms(f, interaction_terms(m))) {
            inter.push_back(regress(f, "contribution", model(interaction_terms(m))));
            labels.push_back("x " + m);
        }
    section("Contribution, arm interactions", inter, labels);

    if (f.has_numeric("belief")) {
        std::vector<RegressionResult> bel;
        labels.clear();
        for (int k = 1; k <= 4; ++k)
            if (has_terms(f, belief_spec(k))) {
                bel.push_back(regress(f, "belief", model(belief_spec(k))));
                labels.push_back("(" + std::to_string(k) + ")");
            }
        section("Belief", bel, labels);
    }

    if (has_terms(f, pivotal_terms())) section("Contribution, pivotality", {regress(f, "contribution", model(pivotal_terms()))}, {"(1)"});

    const bool has_rr = std::find(arms.begin(), arms.end(), "RR") != arms.end();
    const bool has_ra = std::find(arms.begin(), arms.end(), "RA") != arms.end();
    if (has_rr && has_ra)
        rep += "\n== Polarization RA vs RR ==\n" +
               render_polarization_text(polarization(f, "RR", "RA", 5.0, c.permutations, c.seed.value_or(1)));

    Output o{rep, rep, "txt", {}};
    if (!c.histogram_out.empty()) o.extra.emplace_back(c.histogram_out, histogram_csv(f, c.game.grid_step));
    if (!c.regressions_out.empty()) o.extra.emplace_back(c.regressions_out, render_regression_csv(all, all_labels));
    return o;
}

inline Output run_power(const RunConfig& c) {
    if (!c.n_total) throw InvalidInput("n: power needs the total sample size");
    if (!c.sd) throw InvalidInput("sd: power needs the outcome standard deviation");
    auto r = mde(c.arms, *c.n_total / c.arms, *c.sd, c.alpha_level, c.power);
    if (c.mc_replications > 0) r = verify_mde(r, c.mc_replications, c.seed.value_or(1), c.workers);
    const auto text = render_power_text(r);
    return {text, text, "txt", {}};
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw InvalidInput("out: cannot write " + path);
    os << content;
    if (!os.flush()) throw InvalidInput("out: write failed for " + path);
}

} // namespace detail

/// Artifact path: --out, else $PGG_OUT_DIR/<command>.<ext>, else none.
inline std::string artifact_path(const RunConfig& c, const std::string& extension) {
    if (!c.out.empty()) return c.out;
    if (const char* dir = std::getenv(out_dir_env); dir && *dir) {
        std::string d = dir;
        if (d.back() != '/') d += '/';
        return d + c.command + "." + extension;
    }
    return {};
}

/// Executes one command. The report goes to `out`; the artifact, headed by
/// the config comment, goes to its file. Without a destination, simulate
/// streams its dataset to `out` and reports on `err`.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.command.empty()) throw InvalidInput("command: missing (one of curve, solve, sweep, hypotheses, simulate, analyze, power)");
        Output o;
        if (c.command == "curve") o = detail::run_curve(c);
        else if (c.command == "solve") o = detail::run_solve(c);
        else if (c.command == "sweep") o = detail::run_sweep(c);
        else if (c.command == "hypotheses") o = detail::run_hypotheses(c);
        else if (c.command == "simulate") o = detail::run_simulate(c);
        else if (c.command == "analyze") o = detail::run_analyze(c);
        else if (c.command == "power") o = detail::run_power(c);
        else throw InvalidInput("command: unknown command '" + c.command + "'");

        const std::string header = artifact_header(c);
        const std::string path = artifact_path(c, o.extension);
        if (!path.empty()) {
            detail::write_file(path, header + o.artifact);
            out << o.report;
        } else if (c.command == "simulate") {
            out << header << o.artifact;
            err << o.report;
        } else {
            out << o.report;
        }
        for (const auto& [p, content] : o.extra) detail::write_file(p, header + content);
        return ok;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return cap_exceeded;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return numerical_failure;
    } catch (const InvalidInput& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
}

} // namespace pgg::cli
