// pgg: equilibrium analysis, simulation and estimation for the threshold
// public-goods game under risk and ambiguity.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pgg/cli.hpp"

namespace {

struct Flags {
    std::string command, config, alpha, grid_step, mode, resolution, out, rule, input, baseline, histogram, regressions;
    std::uint64_t seed = 0, cap = 0, samples = 0, n = 0, arms = 0, permutations = 0, mc = 0, workers = 0;
    double rho = 0, rho_lo = 0, rho_hi = 0, sd = 0, alpha_level = 0, power = 0;
    std::vector<std::string> scenarios, column_map;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold public-goods game under risk and ambiguity"};
    app.set_version_flag("--version", std::string(pgg::cli::version));
    Flags f;
    nlohmann::json overlay = nlohmann::json::object();

    app.add_option("command", f.command, "curve | solve | sweep | hypotheses | simulate | analyze | power")
        ->check(CLI::IsMember(pgg::cli::commands()));
    app.add_option("--config", f.config, "JSON config, or an artifact whose header holds one");
    auto* seed = app.add_option("--seed", f.seed, "64-bit seed (simulate; Monte Carlo and permutations elsewhere)");
    auto* alpha = app.add_option("--alpha", f.alpha, "pessimism weight in [0,1], e.g. 1, 0.5, 1/3");
    auto* rho = app.add_option("--rho", f.rho, "power utility exponent");
    auto* grid = app.add_option("--grid-step", f.grid_step, "contribution grid step in euros");
    auto* mode = app.add_option("--mode", f.mode, "equilibrium filter")->check(CLI::IsMember({"raw", "paper"}));
    auto* res = app.add_option("--resolution", f.resolution, "how ambiguity is resolved for payment")
                    ->check(CLI::IsMember({"uniform", "pessimistic", "optimistic"}));
    auto* out = app.add_option("--out", f.out, "artifact path (default: $PGG_OUT_DIR/<command>.<ext>)");
    auto* scen = app.add_option("--scenario", f.scenarios, "arm label (repeatable): RR, RA, AR, AA");
    auto* lo = app.add_option("--rho-lo", f.rho_lo, "lower end of the rho sweep");
    auto* hi = app.add_option("--rho-hi", f.rho_hi, "upper end of the rho sweep");
    auto* samples = app.add_option("--samples", f.samples, "log-spaced rho values in the sweep");
    auto* cap = app.add_option("--cap", f.cap, "profile cap for raw enumeration");
    auto* n = app.add_option("--n", f.n, "subjects (simulate) or total sample (power)");
    auto* rule = app.add_option("--rule", f.rule, "behavioral rule for simulate")
                     ->check(CLI::IsMember({"paper-calibrated-linear", "belief-best-responder", "equilibrium-selector",
                                            "altruist-fixed"}));
    auto* input = app.add_option("--input", f.input, "dataset CSV for analyze");
    auto* cmap = app.add_option("--map", f.column_map, "column rename source=target (repeatable)");
    auto* base = app.add_option("--baseline", f.baseline, "baseline arm for contrasts");
    auto* perms = app.add_option("--permutations", f.permutations, "permutations for the polarization test");
    auto* hist = app.add_option("--histogram", f.histogram, "write contribution histogram CSV here");
    auto* regs = app.add_option("--regressions", f.regressions, "write regression estimates CSV here");
    auto* arms = app.add_option("--arms", f.arms, "number of arms (power)");
    auto* sd = app.add_option("--sd", f.sd, "outcome standard deviation (power)");
    auto* alevel = app.add_option("--alpha-level", f.alpha_level, "test size (power)");
    auto* pw = app.add_option("--power", f.power, "target power");
    auto* mc = app.add_option("--mc", f.mc, "Monte Carlo replications checking the MDE");
    auto* workers = app.add_option("--workers", f.workers, "worker threads for parallel stages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pgg::cli::config_error;
    }

    try {
        nlohmann::json j = f.config.empty() ? nlohmann::json::object() : pgg::cli::load_config_file(f.config);
        if (!j.is_object()) throw pgg::InvalidInput(f.config + ": config must be a JSON object");
        if (!f.command.empty()) overlay["command"] = f.command;
        if (*seed) overlay["seed"] = f.seed;
        if (*alpha) overlay["alpha"] = f.alpha;
        if (*rho) {
            overlay["rho"] = f.rho;
            j.erase("utility");
        }
        if (*grid) overlay["grid_step"] = f.grid_step;
        if (*mode) overlay["mode"] = f.mode;
        if (*res) overlay["resolution"] = f.resolution;
        if (*out) overlay["out"] = f.out;
        if (*scen) overlay["scenarios"] = f.scenarios;
        if (*lo) overlay["sweep"]["lo"] = f.rho_lo;
        if (*hi) overlay["sweep"]["hi"] = f.rho_hi;
        if (*samples) overlay["sweep"]["samples"] = f.samples;
        if (*cap) overlay["profile_cap"] = f.cap;
        if (*n) overlay["n"] = f.n;
        if (*rule) overlay["rule"] = f.rule;
        if (*input) overlay["input"] = f.input;
        for (const auto& m : f.column_map) {
            const auto eq = m.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == m.size())
                throw pgg::InvalidInput("--map: expected source=target, got '" + m + "'");
            overlay["column_map"][m.substr(0, eq)] = m.substr(eq + 1);
        }
        (void)cmap;
        if (*base) overlay["baseline"] = f.baseline;
        if (*perms) overlay["permutations"] = f.permutations;
        if (*hist) overlay["histogram"] = f.histogram;
        if (*regs) overlay["regressions"] = f.regressions;
        if (*arms) overlay["arms"] = f.arms;
        if (*sd) overlay["sd"] = f.sd;
        if (*alevel) overlay["alpha_level"] = f.alpha_level;
        if (*pw) overlay["power"] = f.power;
        if (*mc) overlay["mc_replications"] = f.mc;
        if (*workers) overlay["workers"] = f.workers;
        j.merge_patch(overlay);
        return pgg::cli::run(pgg::cli::config_from_json(j), std::cout, std::cerr);
    } catch (const pgg::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pgg::cli::config_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return pgg::cli::config_error;
    }
}
