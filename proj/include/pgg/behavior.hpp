#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "pgg/covariates.hpp"
#include "pgg/curve.hpp"
#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/rng.hpp"
#include "pgg/scenario.hpp"
#include "pgg/solver.hpp"
#include "pgg/utility.hpp"

namespace pgg {

/// Per-arm parameter array, indexed by arm_index().
using ArmArray = std::array<double, 4>;

inline std::size_t arm_index(Treatment t) { return static_cast<std::size_t>(t); }

/// Nearest grid point in [lo, hi]; exact halves go to the smaller point.
inline Money round_to_grid(double euros, Money step, Money lo, Money hi) {
    if (!std::isfinite(euros)) throw NumericalError("cannot round a non-finite amount to the grid");
    const double steps = euros * 100.0 / static_cast<double>(step.cents());
    const double k = std::ceil(steps - 0.5);
    const double lo_k = static_cast<double>(lo.cents() / step.cents());
    const double hi_k = static_cast<double>(hi.cents() / step.cents());
    return step * static_cast<std::int64_t>(std::clamp(k, lo_k, hi_k));
}

// --- beliefs ----------------------------------------------------------------

/// Belief about the other members' total: linear index plus Gaussian noise,
/// clamped to [0, (n - 1) * endowment].
struct BeliefModel {
    double intercept = 9.614;
    double education = -0.286;
    double altruism = 0.423;
    double gravity = 0.203;
    double number_actions = -0.184;
    double crt = -0.636;
    double risk_aversion = -1.220;
    double ambiguity_aversion = -0.323;
    ArmArray arm_shift{};
    double noise_sd = 3.0;

    double index(const CovariateProfile& c, Treatment t) const {
        return intercept + education * c.education + altruism * c.altruism + gravity * c.gravity +
               number_actions * c.number_actions + crt * c.crt + risk_aversion * c.risk_aversion +
               ambiguity_aversion * c.ambiguity_aversion + arm_shift[arm_index(t)];
    }

    void validate() const {
        if (!(noise_sd >= 0.0)) throw InvalidInput("belief noise_sd must be non-negative");
    }
};

inline double gen_belief(const CovariateProfile& cov, Treatment t, const BeliefModel& model, Rng& rng,
                         const GameSpec& game = default_game()) {
    const double cap = (game.endowment * (game.n_players - 1)).to_euros();
    const double noise = model.noise_sd > 0.0 ? model.noise_sd * rng.normal() : 0.0;
    return std::clamp(model.index(cov, t) + noise, 0.0, cap);
}

/// Beliefs about the others' total in [lo, hi) mark a subject as pivotal.
inline constexpr double pivotal_belief_lo = 5.0;
inline constexpr double pivotal_belief_hi = 9.0;

inline bool is_pivotal(double belief) { return belief >= pivotal_belief_lo && belief < pivotal_belief_hi; }

// --- contribution rules -----------------------------------------------------

/// Mean-zero two-type noise: with probability generous_share a draw around
/// +shift * (1 - share) / share, otherwise a tight draw around -shift.
struct NoiseMixture {
    double generous_share = 0.35;
    double shift = 0.8;
    double low_sd = 0.1;
    double high_sd = 0.5;

    static NoiseMixture none() { return {0.5, 0.0, 0.0, 0.0}; }

    void validate() const {
        if (!(generous_share > 0.0 && generous_share < 1.0)) throw InvalidInput("generous_share must lie in (0,1)");
        if (!(low_sd >= 0.0) || !(high_sd >= 0.0)) throw InvalidInput("noise SDs must be non-negative");
    }

    double sample(Rng& rng) const {
        if (shift == 0.0 && low_sd == 0.0 && high_sd == 0.0) return 0.0;
        if (rng.uniform() < generous_share)
            return rng.normal(shift * (1.0 - generous_share) / generous_share, high_sd);
        return rng.normal(-shift, low_sd);
    }
};

/// Linear contribution index. The default coefficients are the fitted
/// contribution regression with beliefs; the per-arm terms and the
/// strategic-uncertainty terms are zero unless a scenario injects them.
struct LinearRule {
    double intercept = 1.450;
    double belief = 0.170;
    double age = -0.005;
    double female = 0.002;
    double education = -0.010;
    double altruism = 0.030;
    double envy = 0.019;
    double ideology = -0.001;
    double gravity = 0.005;
    double number_actions = 0.014;
    double social_transfer = 0.057;
    double crt = -0.142;
    double unemployed = 0.029;
    double risk_aversion = -0.337;
    double ambiguity_aversion = -0.125;
    ArmArray arm_effect{};
    ArmArray arm_risk_slope{};
    ArmArray arm_ambiguity_slope{};
    double pivotal = 0.0;
    double perception_accuracy = 0.0;
    double pivotal_x_accuracy = 0.0;
    NoiseMixture noise;

    double index(const CovariateProfile& c, Treatment t, double belief_total, double accuracy) const {
        const std::size_t a = arm_index(t);
        const double piv = is_pivotal(belief_total) ? 1.0 : 0.0;
        return intercept + belief * belief_total + age * c.age + female * c.female + education * c.education +
               altruism * c.altruism + envy * c.envy + ideology * c.ideology + gravity * c.gravity +
               number_actions * c.number_actions + social_transfer * c.social_transfer + crt * c.crt +
               unemployed * c.unemployed + (risk_aversion + arm_risk_slope[a]) * c.risk_aversion +
               (ambiguity_aversion + arm_ambiguity_slope[a]) * c.ambiguity_aversion + arm_effect[a] +
               pivotal * piv + perception_accuracy * accuracy + pivotal_x_accuracy * piv * accuracy;
    }
};

/// Preferences a subject is assumed to hold when a rule optimizes on their
/// behalf. Unset fields are read off the covariates: rho = max(0.05, 1 - risk
/// aversion), alpha = clamp(0.5 + 0.5 * ambiguity aversion, 0, 1).
struct ImpliedPreferences {
    std::optional<double> rho;
    std::optional<Rational> alpha;

    UtilityFn utility(const CovariateProfile& c) const {
        return UtilityFn::power(rho ? *rho : std::max(0.05, 1.0 - c.risk_aversion));
    }
    Rational pessimism(const CovariateProfile& c) const {
        if (alpha) return *alpha;
        const double a = std::clamp(0.5 + 0.5 * c.ambiguity_aversion, 0.0, 1.0);
        return Rational(static_cast<std::int64_t>(std::llround(a * 1000.0)), 1000);
    }
};

enum class EquilibriumPick { lowest, highest };

struct BehavioralRule {
    enum class Kind { paper_calibrated_linear, belief_best_responder, equilibrium_selector, altruist_fixed };
    Kind kind = Kind::paper_calibrated_linear;
    LinearRule linear;
    ImpliedPreferences preferences;
    EquilibriumPick pick = EquilibriumPick::lowest;
    Money fixed = Money::euros(2);

    static BehavioralRule paper_linear(LinearRule r = {}) {
        BehavioralRule b;
        b.linear = r;
        return b;
    }
    static BehavioralRule best_responder(ImpliedPreferences p = {}) {
        BehavioralRule b;
        b.kind = Kind::belief_best_responder;
        b.preferences = p;
        return b;
    }
    static BehavioralRule equilibrium_selector(EquilibriumPick pick, ImpliedPreferences p = {}) {
        BehavioralRule b;
        b.kind = Kind::equilibrium_selector;
        b.pick = pick;
        b.preferences = p;
        return b;
    }
    static BehavioralRule altruist(Money amount) {
        BehavioralRule b;
        b.kind = Kind::altruist_fixed;
        b.fixed = amount;
        return b;
    }

    void validate(const GameSpec& game) const {
        if (kind == Kind::paper_calibrated_linear) linear.noise.validate();
        if (kind == Kind::altruist_fixed &&
            (fixed < Money{} || fixed > game.endowment || !game.on_grid(fixed)))
            throw InvalidInput("fixed contribution " + fixed.to_string() + " is not a grid point in [0, endowment]");
        if (preferences.rho && !(*preferences.rho > 0.0)) throw InvalidInput("rule rho must be positive");
        if (preferences.alpha && (*preferences.alpha < Rational(0) || *preferences.alpha > Rational(1)))
            throw InvalidInput("rule alpha must lie in [0,1]");
    }
};

inline std::string to_string(BehavioralRule::Kind k) {
    switch (k) {
    case BehavioralRule::Kind::paper_calibrated_linear: return "paper-calibrated-linear";
    case BehavioralRule::Kind::belief_best_responder: return "belief-best-responder";
    case BehavioralRule::Kind::equilibrium_selector: return "equilibrium-selector";
    case BehavioralRule::Kind::altruist_fixed: return "altruist-fixed";
    }
    return "?";
}

inline BehavioralRule::Kind parse_rule_kind(std::string_view s) {
    using K = BehavioralRule::Kind;
    for (K k : {K::paper_calibrated_linear, K::belief_best_responder, K::equilibrium_selector, K::altruist_fixed})
        if (s == to_string(k)) return k;
    throw InvalidInput("unknown behavioral rule '" + std::string(s) + "'");
}

/// Grid contribution that maximizes u(e - c) * p(c + b), with the belief b
/// rounded onto the grid of possible others' totals. Ties go to the smaller
/// contribution.
inline Money best_response_to_belief(double belief_total, const SuccessCurve& curve, const UtilityFn& u,
                                     const GameSpec& game) {
    const Money others =
        round_to_grid(belief_total, game.grid_step, Money{}, game.endowment * (game.n_players - 1));
    Money best{};
    double best_pay = -1.0;
    for (Money c : game.grid()) {
        const double pay = eval_objective(u, c, others, curve, game.endowment);
        if (pay > best_pay && !payoff_tie(pay, best_pay)) {
            best = c;
            best_pay = pay;
        }
    }
    return best;
}

/// Contribution of one subject. `rng` feeds only the linear rule's noise.
inline Money gen_contribution(const CovariateProfile& cov, Treatment t, double belief_total,
                              const BehavioralRule& rule, Rng& rng, const GameSpec& game = default_game(),
                              double perception_accuracy = 0.0) {
    switch (rule.kind) {
    case BehavioralRule::Kind::paper_calibrated_linear: {
        const double x = rule.linear.index(cov, t, belief_total, perception_accuracy) + rule.linear.noise.sample(rng);
        return round_to_grid(x, game.grid_step, Money{}, game.endowment);
    }
    case BehavioralRule::Kind::belief_best_responder: {
        const auto curve = build_success_curve(make_scenario(t), rule.preferences.pessimism(cov), game);
        return best_response_to_belief(belief_total, curve, rule.preferences.utility(cov), game);
    }
    case BehavioralRule::Kind::equilibrium_selector: {
        const auto curve = build_success_curve(make_scenario(t), rule.preferences.pessimism(cov), game);
        const auto u = rule.preferences.utility(cov);
        auto eq = enumerate_symmetric(curve, u, game, FilterMode::paper);
        if (eq.empty()) eq = enumerate_symmetric(curve, u, game, FilterMode::raw);
        if (eq.empty()) return Money{};
        const Money total = rule.pick == EquilibriumPick::lowest ? eq.front().total : eq.back().total;
        return Money::cents(total.cents() / game.n_players);
    }
    case BehavioralRule::Kind::altruist_fixed: return rule.fixed;
    }
    return Money{};
}

} // namespace pgg
