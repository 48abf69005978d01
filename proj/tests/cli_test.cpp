#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "pgg/cli.hpp"

using namespace pgg;
using nlohmann::json;

namespace {

struct Ran {
    int code;
    std::string out, err;
};

Ran run_json(const json& j) {
    std::ostringstream out, err;
    const int code = cli::run(cli::config_from_json(j), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + "pgg_cli_" + name; }

} // namespace

TEST(CliConfig, DefaultsAndOverrides) {
    const auto c = cli::config_from_json({{"command", "solve"}, {"alpha", "1/2"}, {"rho", 2.0}, {"grid_step", "0.5"}});
    EXPECT_EQ(c.command, "solve");
    EXPECT_EQ(c.alpha, Rational(1, 2));
    EXPECT_DOUBLE_EQ(c.utility_fn().rho(), 2.0);
    EXPECT_EQ(c.game.grid_step, Money::cents(50));
    EXPECT_EQ(c.experiment.game.grid_step, Money::cents(50));
    EXPECT_EQ(c.scenarios.size(), 4u);
}

TEST(CliConfig, FieldLevelErrors) {
    auto message = [](const json& j) {
        try {
            (void)cli::config_from_json(j);
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_EQ(message({{"alhpa", 1}}), "config: unknown field 'alhpa'");
    EXPECT_EQ(message({{"alpha", "3/2"}}), "alpha: must lie in [0,1]");
    EXPECT_EQ(message({{"command", "plot"}}), "command: unknown command 'plot'");
    EXPECT_EQ(message({{"experiment", {{"rule", {{"linear", {{"betaa", 1}}}}}}}}),
              "experiment.rule.linear: unknown field 'betaa'");
    EXPECT_EQ(message({{"experiment", {{"belief", {{"arm_shift", {{"XX", 1}}}}}}}}),
              "experiment.belief.arm_shift: unknown arm 'XX'");
    EXPECT_EQ(message({{"scenarios", {"RR", "RR"}}}), "scenarios[1]: duplicate label RR");
    EXPECT_EQ(message({{"resolution", "random"}}), "resolution: expected uniform, pessimistic or optimistic, got 'random'");
    EXPECT_EQ(message({{"rho", 1}, {"utility", {{"family", "power"}, {"rho", 2}}}}),
              "rho: give either rho or utility, not both");
}

TEST(CliConfig, JsonSyntaxErrorsCarryLineAndColumn) {
    try {
        (void)cli::parse_config_text("{\"command\": \"solve\",\n \"alpha\": }", "cfg.json");
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("line 2, column 11"), std::string::npos) << e.what();
    }
}

TEST(CliConfig, ExperimentJsonRoundTrip) {
    ExperimentConfig ex;
    ex.n_subjects = 600;
    ex.arms = {Treatment::RR, Treatment::AA};
    ex.resolution = ResolutionPolicy::pessimistic;
    ex.rule.linear.arm_effect[arm_index(Treatment::AA)] = 0.5;
    ex.rule.linear.noise.shift = 0.3;
    ex.belief.arm_shift[arm_index(Treatment::RR)] = -1.0;
    ex.covariates.age.sd = 10.0;
    ExperimentConfig back;
    apply_experiment_json(back, to_json(ex));
    EXPECT_EQ(to_json(back), to_json(ex));
    EXPECT_EQ(back.covariates.age.sd, 10.0);
    EXPECT_EQ(back.rule.linear.arm_effect[arm_index(Treatment::AA)], 0.5);
}

TEST(CliConfig, RuleShortcutKeepsCoefficients) {
    const auto c = cli::config_from_json(
        {{"experiment", {{"rule", {{"linear", {{"belief", 0.3}}}}}}}, {"rule", "belief-best-responder"}});
    EXPECT_EQ(c.experiment.rule.kind, BehavioralRule::Kind::belief_best_responder);
    EXPECT_EQ(c.experiment.rule.linear.belief, 0.3);
}

TEST(CliConfig, HashIgnoresWorkersAndPaths) {
    const json base{{"command", "simulate"}, {"seed", 3}, {"n", 100}};
    auto with = base;
    with["workers"] = 4;
    with["out"] = "x.csv";
    EXPECT_EQ(cli::config_hash(cli::config_from_json(base)), cli::config_hash(cli::config_from_json(with)));
    auto other = base;
    other["seed"] = 4;
    EXPECT_NE(cli::config_hash(cli::config_from_json(base)), cli::config_hash(cli::config_from_json(other)));
}

TEST(CliConfig, CanonicalConfigIsAFixedPoint) {
    for (const std::string cmd : {"curve", "solve", "sweep", "hypotheses", "simulate", "analyze", "power"}) {
        const auto c = cli::config_from_json({{"command", cmd}, {"seed", 9}, {"alpha", "0.5"}, {"n", 40}, {"sd", 1.0}});
        const auto canon = cli::canonical_json(c);
        EXPECT_EQ(cli::canonical_json(cli::config_from_json(canon)), canon) << cmd;
    }
}

TEST(CliRun, SolvePaperTable) {
    const auto r = run_json({{"command", "solve"}, {"alpha", 1}, {"rho", 1}, {"mode", "paper"}});
    EXPECT_EQ(r.code, cli::ok);
    EXPECT_EQ(r.out,
              "Equilibrium/Treatment  RR  RA  AR  AA\n"
              "C=0                    Y   Y\n"
              "C=5                    Y       Y\n"
              "C=10                   Y   Y   Y   Y\n");
}

TEST(CliRun, PowerReport) {
    const auto r = run_json({{"command", "power"}, {"arms", 4}, {"n", 1500}, {"sd", 1.39}});
    EXPECT_EQ(r.code, cli::ok);
    EXPECT_NE(r.out.find("MDE: 0.2844"), std::string::npos) << r.out;
}

TEST(CliRun, ExitCodes) {
    EXPECT_EQ(run_json({{"command", "simulate"}}).code, cli::config_error);
    EXPECT_EQ(run_json({{"command", "power"}, {"n", 100}}).code, cli::config_error);
    EXPECT_EQ(run_json(json::object()).code, cli::config_error);
    const auto cap = run_json({{"command", "solve"}, {"mode", "raw"}, {"grid_step", "0.5"}, {"scenarios", {"RR"}}});
    EXPECT_EQ(cap.code, cli::cap_exceeded);
    EXPECT_NE(cap.err.find("161051"), std::string::npos);
    EXPECT_EQ(run_json({{"command", "analyze"}, {"input", temp_path("missing.csv")}}).code, cli::config_error);

    // Two arms only: the models keep a single contrast.
    const auto path = temp_path("two_arms.csv");
    {
        std::ofstream os(path);
        os << "treatment,contribution,age\n";
        for (int i = 0; i < 40; ++i) os << (i % 2 ? "RR" : "AA") << "," << i % 5 << "," << 20 + i << "\n";
    }
    const auto two = run_json({{"command", "analyze"}, {"input", path}});
    EXPECT_EQ(two.code, cli::ok) << two.err;
    EXPECT_EQ(two.out.find("AR"), std::string::npos);

    // crt duplicates age, so the interaction model is singular.
    {
        std::ofstream os(path);
        os << "treatment,contribution,age,crt,belief,risk_aversion\n";
        for (int i = 0; i < 40; ++i)
            os << (i % 2 ? "RR" : "AA") << "," << i % 5 << "," << i % 7 << "," << i % 7 << "," << i % 11 << ","
               << (i % 13) / 13.0 << "\n";
    }
    const auto singular = run_json({{"command", "analyze"}, {"input", path}});
    EXPECT_EQ(singular.code, cli::numerical_failure);
    EXPECT_NE(singular.err.find("collinear columns: crt"), std::string::npos) << singular.err;
}

TEST(CliRun, SimulateWritesHeaderedArtifactAndReproduces) {
    const auto a = temp_path("sim_a.csv"), b = temp_path("sim_b.csv"), c = temp_path("sim_c.csv");
    ASSERT_EQ(run_json({{"command", "simulate"}, {"seed", 11}, {"n", 200}, {"out", a}}).code, cli::ok);
    ASSERT_EQ(run_json({{"command", "simulate"}, {"seed", 11}, {"n", 200}, {"out", b}, {"workers", 3}}).code, cli::ok);
    const auto first = slurp(a);
    EXPECT_EQ(first, slurp(b));
    EXPECT_EQ(first.rfind("# pgg simulate version=", 0), 0u);
    EXPECT_NE(first.find("seed=11 config_hash="), std::string::npos);

    auto j = cli::load_config_file(a);
    j["out"] = c;
    ASSERT_EQ(run_json(j).code, cli::ok);
    EXPECT_EQ(slurp(c), first);

    std::istringstream is(first);
    EXPECT_EQ(read_records_csv(is).size(), 200u);
}

TEST(CliRun, AnalyzeSimulatedData) {
    const auto data = temp_path("an.csv"), hist = temp_path("an_hist.csv"), regs = temp_path("an_regs.csv");
    ASSERT_EQ(run_json({{"command", "simulate"}, {"seed", 2}, {"n", 600}, {"out", data}}).code, cli::ok);
    const auto r = run_json({{"command", "analyze"}, {"input", data}, {"histogram", hist}, {"regressions", regs},
                             {"permutations", 200}});
    ASSERT_EQ(r.code, cli::ok) << r.err;
    for (const char* section : {"== Balance", "== Treatment effects", "== Contribution ==", "== Belief ==",
                                "== Contribution, arm interactions", "== Contribution, pivotality",
                                "== Polarization RA vs RR"})
        EXPECT_NE(r.out.find(section), std::string::npos) << section;
    const auto h = slurp(hist);
    EXPECT_NE(h.find("treatment,value,count,share\nRR,0,"), std::string::npos);
    EXPECT_NE(slurp(regs).find("model,response,term,estimate"), std::string::npos);
}

TEST(CliRun, AnalyzeRenamedColumns) {
    const auto path = temp_path("renamed.csv");
    {
        std::ofstream os(path);
        os << "arm,give,age\n";
        for (int i = 0; i < 60; ++i) os << (i % 3 == 0 ? "RR" : i % 3 == 1 ? "RA" : "AA") << "," << (i * 7) % 6 << "," << 20 + i % 30 << "\n";
    }
    const auto r = run_json({{"command", "analyze"}, {"input", path}, {"column_map", {{"arm", "treatment"}, {"give", "contribution"}}}});
    ASSERT_EQ(r.code, cli::ok) << r.err;
    EXPECT_NE(r.out.find("observations: 60"), std::string::npos);
    EXPECT_NE(r.out.find("== Balance"), std::string::npos);
}

TEST(CliRun, OutDirEnvironment) {
    const auto dir = ::testing::TempDir();
    ::setenv(cli::out_dir_env, dir.c_str(), 1);
    const auto r = run_json({{"command", "curve"}, {"alpha", 0}});
    ::unsetenv(cli::out_dir_env);
    ASSERT_EQ(r.code, cli::ok);
    const auto body = slurp(dir + (dir.back() == '/' ? "" : "/") + "curve.csv");
    EXPECT_NE(body.find("treatment,alpha,from,to,prob\nRR,0,0,5,0.1\n"), std::string::npos) << body;
    EXPECT_NE(r.out.find("RA: 0.1 if C<5; 0.9 if 5<=C<=25"), std::string::npos) << r.out;
}

TEST(CliRun, NonArtifactCommandsWithoutDestinationOnlyReport) {
    const auto r = run_json({{"command", "hypotheses"}});
    EXPECT_EQ(r.code, cli::ok);
    EXPECT_EQ(r.out.find("#"), std::string::npos);
    EXPECT_NE(r.out.find("H1 supported"), std::string::npos);
}
