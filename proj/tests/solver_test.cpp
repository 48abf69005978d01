#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "pgg/solver.hpp"

using namespace pgg;

namespace {

Money E(int euros) { return Money::euros(euros); }

SuccessCurve curve(Treatment t, Rational alpha, const GameSpec& g = default_game()) {
    return build_success_curve(make_scenario(t), alpha, g);
}

std::vector<int> totals_of(const std::vector<EquilibriumRecord>& recs) {
    std::vector<int> out;
    for (const auto& r : recs) out.push_back(static_cast<int>(r.total.to_euros()));
    return out;
}

std::vector<int> euros(const std::vector<Money>& v) {
    std::vector<int> out;
    for (Money m : v) out.push_back(static_cast<int>(m.to_euros()));
    return out;
}

// Brute-force Nash oracle written against eval_objective only.
bool is_nash(const std::vector<Money>& p, const SuccessCurve& c, const UtilityFn& u, const GameSpec& g) {
    Money total;
    for (Money m : p) total += m;
    for (Money own : p) {
        const Money others = total - own;
        const double cur = eval_objective(u, own, others, c, g.endowment);
        for (Money d : g.grid()) {
            const double alt = eval_objective(u, d, others, c, g.endowment);
            if (alt > cur && !payoff_tie(alt, cur)) return false;
        }
    }
    return true;
}

} // namespace

TEST(BestDeviation, Examples) {
    const auto u = UtilityFn::risk_neutral();
    const auto g = default_game();
    auto d = best_deviation(Profile::symmetric(5, E(1)), 0, curve(Treatment::RR, 1), u, g);
    EXPECT_EQ(d.contribution, E(1));
    EXPECT_EQ(d.gain, 0.0);
    d = best_deviation(Profile::symmetric(5, E(1)), 2, curve(Treatment::RA, 1), u, g);
    EXPECT_EQ(d.contribution, E(0));
    EXPECT_NEAR(d.gain, 0.1, 1e-12);
    EXPECT_THROW(best_deviation(Profile::symmetric(5, E(1)), 5, curve(Treatment::RR, 1), u, g), InvalidInput);
    EXPECT_THROW(best_deviation(Profile::symmetric(4, E(1)), 0, curve(Treatment::RR, 1), u, g), InvalidInput);
}

TEST(Classify, Examples) {
    const auto u = UtilityFn::risk_neutral();
    const auto g = default_game();
    auto aa = classify_profile(Profile::symmetric(5, E(2)), curve(Treatment::AA, 1), u, g);
    ASSERT_TRUE(aa);
    EXPECT_EQ(aa->kind, EqKind::strict);
    EXPECT_FALSE(aa->zero_payoff);
    EXPECT_FALSE(aa->paper_filter_excluded);
    ASSERT_TRUE(aa->supporting_condition);
    EXPECT_EQ(aa->supporting_condition->to_string(), "holds for any u");

    auto ar0 = classify_profile(Profile::symmetric(5, E(0)), curve(Treatment::AR, 1), u, g);
    ASSERT_TRUE(ar0);
    EXPECT_EQ(ar0->kind, EqKind::weak);
    EXPECT_TRUE(ar0->zero_payoff);
    EXPECT_TRUE(ar0->paper_filter_excluded);

    auto ar2 = classify_profile(Profile::symmetric(5, E(2)), curve(Treatment::AR, 0), u, g);
    ASSERT_TRUE(ar2);
    EXPECT_EQ(ar2->kind, EqKind::weak);
    EXPECT_FALSE(ar2->zero_payoff);

    EXPECT_FALSE(classify_profile(Profile::symmetric(5, E(1)), curve(Treatment::RA, 1), u, g));
    EXPECT_THROW(classify_profile(Profile{{E(1), E(1), E(1), E(1), Money::parse("0.5")}}, curve(Treatment::RR, 1), u, g),
                 InvalidInput);
}

TEST(Tables, RiskNeutralMaxmin) {
    const auto t = equilibrium_table(1, UtilityFn::risk_neutral());
    EXPECT_EQ(euros(t.totals.at(Treatment::RR)), (std::vector<int>{0, 5, 10}));
    EXPECT_EQ(euros(t.totals.at(Treatment::RA)), (std::vector<int>{0, 10}));
    EXPECT_EQ(euros(t.totals.at(Treatment::AR)), (std::vector<int>{5, 10}));
    EXPECT_EQ(euros(t.totals.at(Treatment::AA)), (std::vector<int>{10}));
}

TEST(Tables, RiskNeutralMaxmax) {
    const auto t = equilibrium_table(0, UtilityFn::risk_neutral());
    EXPECT_EQ(euros(t.totals.at(Treatment::RR)), (std::vector<int>{0, 5, 10}));
    EXPECT_EQ(euros(t.totals.at(Treatment::RA)), (std::vector<int>{0, 5}));
    EXPECT_EQ(euros(t.totals.at(Treatment::AR)), (std::vector<int>{0, 5}));
    EXPECT_EQ(euros(t.totals.at(Treatment::AA)), (std::vector<int>{0, 5}));
}

TEST(Tables, RenderText) {
    const auto t = equilibrium_table(1, UtilityFn::risk_neutral());
    EXPECT_EQ(t.render_text(),
              "Equilibrium/Treatment  RR  RA  AR  AA\n"
              "C=0                    Y   Y\n"
              "C=5                    Y       Y\n"
              "C=10                   Y   Y   Y   Y\n");
    EXPECT_EQ(t.render_csv(), "total,RR,RA,AR,AA\n0,Y,Y,,\n5,Y,,Y,\n10,Y,Y,Y,Y\n");
}

TEST(Tables, RobustOverRiskAttitudes) {
    const auto mm = robust_table(canonical_scenarios(), 1);
    EXPECT_EQ(euros(mm.totals.at(Treatment::RR)), (std::vector<int>{0}));
    EXPECT_EQ(euros(mm.totals.at(Treatment::RA)), (std::vector<int>{0}));
    EXPECT_EQ(euros(mm.totals.at(Treatment::AR)), (std::vector<int>{5}));
    EXPECT_EQ(euros(mm.totals.at(Treatment::AA)), (std::vector<int>{10}));
    const auto mx = robust_table(canonical_scenarios(), 0);
    for (auto t : table_order) EXPECT_EQ(euros(mx.totals.at(t)), (std::vector<int>{0})) << to_string(t);
}

TEST(Tables, DegenerateSweepReproducesRiskNeutralTable) {
    for (int alpha : {0, 1}) {
        const auto robust = robust_table(canonical_scenarios(), alpha, RhoSweep{1.0, 1.0, 1});
        const auto neutral = equilibrium_table(alpha, UtilityFn::risk_neutral());
        EXPECT_EQ(robust.totals, neutral.totals);
    }
}

TEST(Tables, LogSpacing) {
    auto r = log_spaced(0.2, 10.0, 100);
    ASSERT_EQ(r.size(), 100u);
    EXPECT_EQ(r.front(), 0.2);
    EXPECT_EQ(r.back(), 10.0);
    for (std::size_t i = 2; i < r.size(); ++i) EXPECT_NEAR(r[i] / r[i - 1], r[1] / r[0], 1e-12);
    EXPECT_THROW(log_spaced(0.2, 10.0, 0), InvalidInput);
    EXPECT_THROW(log_spaced(0.0, 10.0, 5), InvalidInput);
}

TEST(Enumerate, AllProfilesMatchBruteForceOracle) {
    const auto g = default_game();
    for (auto t : all_treatments) {
        for (int alpha : {0, 1}) {
            for (double rho : {0.5, 1.0, 2.0}) {
                const auto c = curve(t, alpha);
                const auto u = UtilityFn::power(rho);
                std::set<std::vector<Money>> expected;
                for (int a = 0; a <= 5; ++a)
                    for (int b = 0; b <= 5; ++b)
                        for (int cc = 0; cc <= 5; ++cc)
                            for (int d = 0; d <= 5; ++d)
                                for (int e = 0; e <= 5; ++e) {
                                    std::vector<Money> p{E(a), E(b), E(cc), E(d), E(e)};
                                    if (is_nash(p, c, u, g)) expected.insert(p);
                                }
                std::set<std::vector<Money>> got;
                for (const auto& r : enumerate_all_profiles(c, u, g)) got.insert(r.profile.contributions);
                EXPECT_EQ(got, expected) << to_string(t) << " alpha=" << alpha << " rho=" << rho;
            }
        }
    }
}

TEST(Enumerate, SymmetricSubsetOfAll) {
    const auto c = curve(Treatment::RR, 1);
    const auto u = UtilityFn::risk_neutral();
    auto all = enumerate_all_profiles(c, u, default_game());
    for (const auto& r : enumerate_symmetric(c, u, default_game(), FilterMode::raw))
        EXPECT_NE(std::find(all.begin(), all.end(), r), all.end()) << r.profile.to_string();
}

TEST(Enumerate, WorkerCountDoesNotChangeOutput) {
    const auto c = curve(Treatment::AA, 1);
    const auto u = UtilityFn::power(0.7);
    const auto one = enumerate_all_profiles(c, u, default_game(), default_profile_cap, 1);
    for (unsigned w : {2u, 3u, 7u}) EXPECT_EQ(enumerate_all_profiles(c, u, default_game(), default_profile_cap, w), one);
}

TEST(Enumerate, CapExceeded) {
    GameSpec g;
    g.grid_step = Money::parse("0.5");
    try {
        enumerate_all_profiles(curve(Treatment::RR, 1, g), UtilityFn::risk_neutral(), g);
        FAIL() << "expected CapExceeded";
    } catch (const CapExceeded& e) {
        EXPECT_EQ(e.required(), 161051u); // 11^5
        EXPECT_EQ(e.cap(), default_profile_cap);
    }
}

TEST(Enumerate, AsymmetricZeroPayoffEquilibria) {
    const auto all = enumerate_all_profiles(curve(Treatment::AA, 1), UtilityFn::risk_neutral(), default_game());
    const Profile lone{{E(5), E(0), E(0), E(0), E(0)}};
    auto it = std::find_if(all.begin(), all.end(), [&](const auto& r) { return r.profile == lone; });
    ASSERT_NE(it, all.end());
    EXPECT_EQ(it->kind, EqKind::weak);
    EXPECT_TRUE(it->zero_payoff);
    EXPECT_TRUE(it->paper_filter_excluded);
    EXPECT_FALSE(it->supporting_condition);
}

TEST(Enumerate, SinglePlayerGame) {
    GameSpec g;
    g.n_players = 1;
    const auto recs = enumerate_symmetric(curve(Treatment::RR, 1, g), UtilityFn::risk_neutral(), g, FilterMode::raw);
    EXPECT_EQ(totals_of(recs), (std::vector<int>{0}));
}

TEST(Enumerate, DominanceFlag) {
    // Giving everything away pays zero whatever the others do.
    PayoffGrid grid(curve(Treatment::RA, 1), UtilityFn::risk_neutral(), default_game());
    EXPECT_TRUE(grid.dominated(5));
    EXPECT_FALSE(grid.dominated(0));
    EXPECT_FALSE(grid.dominated(2));
}

TEST(Properties, ScaleInvariance) {
    for (auto t : all_treatments)
        for (int alpha : {0, 1})
            for (double rho : {0.4, 1.0, 3.0}) {
                const auto c = curve(t, alpha);
                const auto u = UtilityFn::power(rho);
                const auto base = enumerate_symmetric(c, u, default_game(), FilterMode::raw);
                for (double k : {1e-6, 0.37, 1e6})
                    EXPECT_EQ(enumerate_symmetric(c, u.scaled(k), default_game(), FilterMode::raw), base);
            }
}

TEST(Properties, ConditionsAgreeWithClassification) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> log_rho(std::log(0.05), std::log(20.0));
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const double rho = std::exp(log_rho(rng));
        const auto u = UtilityFn::power(rho);
        for (auto t : all_treatments)
            for (int alpha : {0, 1}) {
                const auto c = curve(t, alpha);
                for (Money total : canonical_totals()) {
                    const auto cond = condition_for(t, alpha, total);
                    const double star = power_threshold(cond);
                    if (std::abs(rho - star) < 1e-6) continue;
                    auto rec = classify_profile(Profile::symmetric(5, Money::cents(total.cents() / 5)), c, u,
                                                default_game());
                    const bool strict_positive = rec && rec->kind == EqKind::strict && !rec->zero_payoff;
                    EXPECT_EQ(check_condition(cond, u), strict_positive)
                        << to_string(t) << " alpha=" << alpha << " C=" << total << " rho=" << rho;
                    ++checked;
                }
            }
    }
    EXPECT_EQ(checked, 200 * 4 * 2 * 3);
}

TEST(Properties, PaperModeIsSubsetOfRaw) {
    for (auto t : all_treatments)
        for (int alpha : {0, 1}) {
            const auto c = curve(t, alpha);
            const auto u = UtilityFn::power(0.8);
            auto raw = enumerate_symmetric(c, u, default_game(), FilterMode::raw);
            for (const auto& r : enumerate_symmetric(c, u, default_game(), FilterMode::paper)) {
                EXPECT_NE(std::find(raw.begin(), raw.end(), r), raw.end());
                EXPECT_EQ(r.kind, EqKind::strict);
                EXPECT_FALSE(r.zero_payoff);
            }
        }
}

TEST(Records, CsvRows) {
    const auto recs =
        enumerate_symmetric(curve(Treatment::RR, 1), UtilityFn::risk_neutral(), default_game(), FilterMode::paper);
    const auto csv = records_csv_header() + records_csv_rows(Treatment::RR, recs);
    EXPECT_NE(csv.find("RR,(2 2 2 2 2),10,strict,0,0,0,\"u(5)<(9/5)*u(3)\",1.150660\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("RR,(1 1 1 1 1),5,strict,0,0,0,\"u(5)<5*u(4)\",7.212567\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("RR,(0 0 0 0 0),0,strict,0,0,0,\"holds for any u\",inf\n"), std::string::npos) << csv;
}
