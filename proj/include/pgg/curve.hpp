#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/rational.hpp"
#include "pgg/scenario.hpp"

namespace pgg {

/// Right-continuous step function C -> p(C): the value at C is the
/// probability of the last breakpoint whose threshold is <= C. The first
/// breakpoint sits at 0, probabilities are non-decreasing, and consecutive
/// steps always differ (equal neighbours are merged).
class SuccessCurve {
public:
    struct Step {
        Money from;
        Rational prob;
        friend bool operator==(const Step&, const Step&) = default;
    };

    SuccessCurve(std::vector<Step> steps, Money upper_bound, Rational alpha = Rational(1))
        : steps_(std::move(steps)), upper_(upper_bound), alpha_(alpha) {
        if (steps_.empty() || steps_.front().from != Money{})
            throw InvalidInput("success curve must start at C = 0");
        for (std::size_t i = 0; i < steps_.size(); ++i) {
            if (steps_[i].prob < Rational(0) || steps_[i].prob > Rational(1))
                throw InvalidInput("success probability outside [0,1]");
            if (i > 0 && !(steps_[i - 1].from < steps_[i].from))
                throw InvalidInput("curve breakpoints must be strictly increasing");
            if (i > 0 && steps_[i].prob < steps_[i - 1].prob)
                throw InvalidInput("success curve must be non-decreasing in C");
        }
    }

    const std::vector<Step>& steps() const noexcept { return steps_; }
    Money upper_bound() const noexcept { return upper_; }
    Rational alpha() const noexcept { return alpha_; }

    /// True for pessimism weights strictly between the pure maxmax (0) and
    /// maxmin (1) models.
    bool is_alpha_extension() const { return alpha_ != Rational(0) && alpha_ != Rational(1); }

    Rational operator()(Money c) const {
        if (c < Money{} || c > upper_)
            throw InvalidInput("total contribution " + c.to_string() + " outside curve domain [0, " +
                               upper_.to_string() + "]");
        auto it = std::upper_bound(steps_.begin(), steps_.end(), c,
                                   [](Money v, const Step& s) { return v < s.from; });
        return std::prev(it)->prob;
    }

    friend bool operator==(const SuccessCurve&, const SuccessCurve&) = default;

private:
    std::vector<Step> steps_;
    Money upper_;
    Rational alpha_;
};

inline Rational eval_curve(const SuccessCurve& curve, Money c) { return curve(c); }

namespace detail {

/// Extreme success probability at total C. The threshold prior and the loss
/// chances are chosen independently at each C: `pessimistic` takes the
/// lowest admissible value of each, otherwise the highest.
inline Rational extreme_success(const AmbiguityScenario& s, Money c, bool pessimistic) {
    const Rational met = pessimistic ? s.p_success_if_met.lo : s.p_success_if_met.hi;
    const Rational unmet = pessimistic ? s.p_success_if_unmet.lo : s.p_success_if_unmet.hi;
    const auto& th = s.threshold;
    if (th.ambiguous) {
        // Point masses are the extreme priors over a finite support.
        Rational best = c >= th.support.front() ? met : unmet;
        for (Money t : th.support) {
            Rational v = c >= t ? met : unmet;
            best = pessimistic ? std::min(best, v) : std::max(best, v);
        }
        return best;
    }
    Rational p{0};
    for (std::size_t i = 0; i < th.support.size(); ++i) p += th.probs[i] * (c >= th.support[i] ? met : unmet);
    return p;
}

} // namespace detail

/// Effective success curve for pessimism weight alpha in [0,1]:
///   p(C) = alpha * p_min(C) + (1 - alpha) * p_max(C).
///
/// Derivation: a player's payoff
/// under any admissible prior is u(endowment - c_i) * p(C), and the prior
/// enters only through the multiplier p(C). Since u >= 0, the worst
/// (best) expected utility over the prior set is u(.) times the smallest
/// (largest) admissible p(C), so alpha * min + (1 - alpha) * max of the
/// expected utility equals u(.) times the alpha-mixture of the extreme
/// success probabilities. alpha = 1 is maxmin, alpha = 0 is maxmax.
inline SuccessCurve build_success_curve(const AmbiguityScenario& scenario, Rational alpha, const GameSpec& game) {
    if (alpha < Rational(0) || alpha > Rational(1))
        throw InvalidInput("alpha " + alpha.to_string() + " outside [0,1]");
    scenario.validate();
    game.validate();
    const Money upper = game.max_total();

    std::vector<Money> starts{Money{}};
    for (Money t : scenario.threshold.support)
        if (t > Money{} && t <= upper) starts.push_back(t);

    std::vector<SuccessCurve::Step> steps;
    for (Money from : starts) {
        Rational p = alpha * detail::extreme_success(scenario, from, true) +
                     (Rational(1) - alpha) * detail::extreme_success(scenario, from, false);
        if (!steps.empty() && steps.back().prob == p) continue;
        steps.push_back({from, p});
    }
    return SuccessCurve(std::move(steps), upper, alpha);
}

inline nlohmann::json to_json(const SuccessCurve& curve) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : curve.steps()) steps.push_back({{"from", s.from.to_string()}, {"prob", s.prob.to_string()}});
    return {{"alpha", curve.alpha().to_string()},
            {"alpha_extension", curve.is_alpha_extension()},
            {"upper_bound", curve.upper_bound().to_string()},
            {"steps", steps}};
}

/// "0.1 if C<5; 0.5 if 5<=C<10; 0.9 if 10<=C<=25"
inline std::string describe(const SuccessCurve& curve) {
    std::string out;
    const auto& st = curve.steps();
    for (std::size_t i = 0; i < st.size(); ++i) {
        if (i) out += "; ";
        out += st[i].prob.to_string() + " if ";
        if (i > 0) out += st[i].from.to_string() + "<=";
        out += "C";
        out += i + 1 < st.size() ? "<" + st[i + 1].from.to_string() : "<=" + curve.upper_bound().to_string();
    }
    return out;
}

} // namespace pgg
