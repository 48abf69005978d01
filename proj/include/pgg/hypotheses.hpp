#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/preferences.hpp"
#include "pgg/solver.hpp"

namespace pgg {

struct ConditionSummary {
    Money total;
    EquilibriumCondition condition;
    double rho_threshold = 0.0; ///< +inf: any u, -inf: never
};

struct TreatmentSummary {
    Treatment treatment = Treatment::RR;
    std::vector<Money> risk_neutral_totals;
    std::vector<Money> robust_totals;
    std::vector<ConditionSummary> conditions;

    double mean_robust_total() const {
        if (robust_totals.empty()) return 0.0;
        double s = 0.0;
        for (Money m : robust_totals) s += m.to_euros();
        return s / static_cast<double>(robust_totals.size());
    }
};

struct Claim {
    bool supported = false;
    std::string detail;
};

/// Comparative statics implied by the equilibrium sets at one pessimism
/// weight: H1 (AA above all), H2 (AR above RR and RA), H3 (RA polarized
/// relative to RR).
struct HypothesisReport {
    Rational alpha;
    bool alpha_extension = false;
    std::vector<TreatmentSummary> treatments;
    Claim h1, h2, h3;

    const TreatmentSummary& at(Treatment t) const {
        for (const auto& s : treatments)
            if (s.treatment == t) return s;
        throw InvalidInput("treatment missing from report");
    }

    std::string render_text() const {
        std::string out = "alpha = " + alpha.to_string() + (alpha_extension ? " (alpha-maxmin extension)" : "") + "\n";
        auto set = [](const std::vector<Money>& v) {
            std::string s = "{";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].to_string();
            return s + "}";
        };
        for (const auto& t : treatments) {
            out += to_string(t.treatment) + ": risk-neutral " + set(t.risk_neutral_totals) + ", robust " +
                   set(t.robust_totals) + "\n";
            for (const auto& c : t.conditions)
                out += "  C=" + c.total.to_string() + ": " + c.condition.to_string() +
                       " [rho* = " + format_rho(c.rho_threshold) + "]\n";
        }
        out += std::string("H1 ") + (h1.supported ? "supported" : "not supported") + ": " + h1.detail + "\n";
        out += std::string("H2 ") + (h2.supported ? "supported" : "not supported") + ": " + h2.detail + "\n";
        out += std::string("H3 ") + (h3.supported ? "supported" : "not supported") + ": " + h3.detail + "\n";
        return out;
    }

    nlohmann::json to_json() const {
        nlohmann::json arms = nlohmann::json::array();
        auto totals = [](const std::vector<Money>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (Money m : v) a.push_back(m.to_string());
            return a;
        };
        for (const auto& t : treatments) {
            nlohmann::json conds = nlohmann::json::array();
            for (const auto& c : t.conditions)
                conds.push_back({{"total", c.total.to_string()},
                                 {"condition", c.condition.to_string()},
                                 {"rho_threshold", format_rho(c.rho_threshold)}});
            arms.push_back({{"treatment", to_string(t.treatment)},
                            {"risk_neutral_totals", totals(t.risk_neutral_totals)},
                            {"robust_totals", totals(t.robust_totals)},
                            {"conditions", conds}});
        }
        auto claim = [](const Claim& c) { return nlohmann::json{{"supported", c.supported}, {"detail", c.detail}}; };
        return {{"alpha", alpha.to_string()},
                {"alpha_extension", alpha_extension},
                {"treatments", arms},
                {"H1", claim(h1)},
                {"H2", claim(h2)},
                {"H3", claim(h3)}};
    }
};

namespace detail {
/// Every element of a exceeds every element of b (both non-empty).
inline bool strictly_above(const std::vector<Money>& a, const std::vector<Money>& b) {
    if (a.empty() || b.empty()) return false;
    return *std::min_element(a.begin(), a.end()) > *std::max_element(b.begin(), b.end());
}
inline bool contains(const std::vector<Money>& v, Money m) { return std::find(v.begin(), v.end(), m) != v.end(); }
} // namespace detail

inline HypothesisReport hypothesis_report(Rational alpha, const RhoSweep& sweep = {},
                                          const GameSpec& game = default_game()) {
    HypothesisReport rep;
    rep.alpha = alpha;
    const auto robust = robust_table(canonical_scenarios(), alpha, sweep, game);
    const auto neutral = equilibrium_table(alpha, UtilityFn::risk_neutral(), game);
    for (auto t : table_order) {
        TreatmentSummary s;
        s.treatment = t;
        s.risk_neutral_totals = neutral.totals.at(t);
        s.robust_totals = robust.totals.at(t);
        const auto curve = build_success_curve(make_scenario(t), alpha, game);
        rep.alpha_extension = curve.is_alpha_extension();
        for (Money total : canonical_totals()) {
            auto cond = derive_condition(curve, game, total);
            s.conditions.push_back({total, cond, power_threshold(cond)});
        }
        rep.treatments.push_back(std::move(s));
    }
    const auto& rr = rep.at(Treatment::RR);
    const auto& ra = rep.at(Treatment::RA);
    const auto& ar = rep.at(Treatment::AR);
    const auto& aa = rep.at(Treatment::AA);
    const Money five = Money::euros(5), zero = Money::euros(0), ten = Money::euros(10);

    rep.h1.supported = detail::strictly_above(aa.robust_totals, rr.robust_totals) &&
                       detail::strictly_above(aa.robust_totals, ra.robust_totals) &&
                       detail::strictly_above(aa.robust_totals, ar.robust_totals);
    rep.h1.detail = "robust AA equilibrium totals lie above those of RR, RA and AR";

    auto cond_at = [&](const TreatmentSummary& s, Money m) -> const ConditionSummary& {
        for (const auto& c : s.conditions)
            if (c.total == m) return c;
        throw InvalidInput("missing condition");
    };
    const bool ar5_any = cond_at(ar, five).condition.kind == EquilibriumCondition::Kind::holds_for_any_u;
    const bool rr5_any = cond_at(rr, five).condition.kind == EquilibriumCondition::Kind::holds_for_any_u;
    rep.h2.supported = detail::strictly_above(ar.robust_totals, rr.robust_totals) &&
                       detail::strictly_above(ar.robust_totals, ra.robust_totals);
    rep.h2.detail = std::string("robust AR totals lie above RR and RA; AR C=5 ") +
                    (ar5_any ? "holds for any u" : "needs rho < " + format_rho(cond_at(ar, five).rho_threshold)) +
                    ", RR C=5 " +
                    (rr5_any ? "holds for any u" : "needs rho < " + format_rho(cond_at(rr, five).rho_threshold));

    const auto& ra_n = ra.risk_neutral_totals;
    const auto& rr_n = rr.risk_neutral_totals;
    rep.h3.supported = detail::contains(ra_n, zero) && detail::contains(ra_n, ten) && !detail::contains(ra_n, five) &&
                       detail::contains(rr_n, five);
    rep.h3.detail = "RA equilibria at both extremes with a gap at C=5, while RR also supports C=5";
    return rep;
}

} // namespace pgg
