#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgg/curve.hpp"
#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/rational.hpp"
#include "pgg/scenario.hpp"
#include "pgg/utility.hpp"

namespace pgg {

/// Relative tie tolerance for payoff comparisons. Relative so that scaling u
/// by a positive constant never changes a verdict.
inline constexpr double payoff_tie_tolerance = 1e-12;

inline bool payoff_tie(double a, double b) {
    return std::abs(a - b) <= payoff_tie_tolerance * std::max(std::abs(a), std::abs(b));
}

/// u(endowment - c_i) * p(c_i + others_total).
inline double eval_objective(const UtilityFn& u, Money c_i, Money others_total, const SuccessCurve& curve,
                             Money endowment) {
    if (c_i < Money{} || c_i > endowment)
        throw InvalidInput("contribution " + c_i.to_string() + " outside [0, " + endowment.to_string() + "]");
    if (others_total < Money{}) throw InvalidInput("others' total must be non-negative");
    return u(endowment - c_i) * curve(c_i + others_total).to_double();
}

/// u(lhs_point) < factor * u(rhs_point), strict.
struct EqCondition {
    Money lhs_point;
    Rational factor;
    Money rhs_point;

    std::string to_string() const {
        const std::string k = factor.den() == 1 ? std::to_string(factor.num())
                                                : "(" + std::to_string(factor.num()) + "/" +
                                                      std::to_string(factor.den()) + ")";
        return "u(" + lhs_point.to_string() + ")<" + k + "*u(" + rhs_point.to_string() + ")";
    }
    friend bool operator==(const EqCondition&, const EqCondition&) = default;
};

/// Symbolic verdict for a symmetric profile: always a strict equilibrium,
/// never one, or one iff every clause holds.
struct EquilibriumCondition {
    enum class Kind { holds_for_any_u, never, inequality };
    Kind kind = Kind::never;
    std::vector<EqCondition> clauses;

    static EquilibriumCondition any() { return {Kind::holds_for_any_u, {}}; }
    static EquilibriumCondition none() { return {Kind::never, {}}; }

    std::string to_string() const {
        switch (kind) {
        case Kind::holds_for_any_u: return "holds for any u";
        case Kind::never: return "never";
        case Kind::inequality: break;
        }
        std::string s;
        for (std::size_t i = 0; i < clauses.size(); ++i) s += (i ? " and " : "") + clauses[i].to_string();
        return s;
    }
    friend bool operator==(const EquilibriumCondition&, const EquilibriumCondition&) = default;
};

inline bool check_condition(const EqCondition& cond, const UtilityFn& u) {
    const double lhs = u(cond.lhs_point);
    const double rhs = cond.factor.to_double() * u(cond.rhs_point);
    return lhs < rhs && !payoff_tie(lhs, rhs);
}

inline bool check_condition(const EquilibriumCondition& cond, const UtilityFn& u) {
    switch (cond.kind) {
    case EquilibriumCondition::Kind::holds_for_any_u: return true;
    case EquilibriumCondition::Kind::never: return false;
    case EquilibriumCondition::Kind::inequality: break;
    }
    for (const auto& c : cond.clauses)
        if (!check_condition(c, u)) return false;
    return true;
}

/// Critical exponent: for u(x) = x^rho the condition holds iff rho < rho*,
/// rho* = ln(k) / ln(lhs / m).
inline double power_threshold(const EqCondition& cond) {
    if (cond.lhs_point == cond.rhs_point) throw InvalidInput("degenerate condition: both sides at the same amount");
    if (!(cond.factor > Rational(0))) throw InvalidInput("condition factor must be positive");
    if (!(cond.rhs_point > Money{}) || !(cond.rhs_point < cond.lhs_point))
        throw InvalidInput("power threshold needs 0 < m < lhs point");
    return std::log(cond.factor.to_double()) / std::log(cond.lhs_point.to_euros() / cond.rhs_point.to_euros());
}

/// Tightest rho* over all clauses; +inf when the condition holds for any u,
/// -inf when it never holds.
inline double power_threshold(const EquilibriumCondition& cond) {
    switch (cond.kind) {
    case EquilibriumCondition::Kind::holds_for_any_u: return std::numeric_limits<double>::infinity();
    case EquilibriumCondition::Kind::never: return -std::numeric_limits<double>::infinity();
    case EquilibriumCondition::Kind::inequality: break;
    }
    double t = std::numeric_limits<double>::infinity();
    for (const auto& c : cond.clauses) t = std::min(t, power_threshold(c));
    return t;
}

/// Exact condition under which everybody contributing target_total / n is a
/// strict Nash equilibrium for an arbitrary increasing u with u(0) = 0.
///
/// Each unilateral deviation d compares P * u(e - c) against P' * u(e - d).
/// Deviations that leave the deviator with nothing, land on a zero-success
/// step, or lower both the kept amount and the success chance hold for any
/// u; the rest become clauses u(e - d) < (P / P') * u(e - c), and clauses
/// implied by a stronger one are dropped.
inline EquilibriumCondition derive_condition(const SuccessCurve& curve, const GameSpec& game, Money target_total) {
    game.validate();
    const std::int64_t n = game.n_players;
    if (target_total < Money{} || target_total.cents() % n != 0)
        throw InvalidInput("total " + target_total.to_string() + " cannot be split equally among " +
                           std::to_string(n) + " players");
    const Money c = Money::cents(target_total.cents() / n);
    if (!game.on_grid(c) || c > game.endowment)
        throw InvalidInput("equal share " + c.to_string() + " is not a feasible grid contribution");

    const Money e = game.endowment;
    const Money others = target_total - c;
    const Rational p_eq = curve(target_total);
    const Money kept = e - c;

    // Zero equilibrium payoff can at best be matched by a deviation.
    if (p_eq == Rational(0) || kept == Money{}) return EquilibriumCondition::none();

    std::vector<EqCondition> clauses;
    for (Money d : game.grid()) {
        if (d == c) continue;
        const Rational p_dev = curve(others + d);
        const Money kept_dev = e - d;
        if (p_dev == Rational(0) || kept_dev == Money{}) continue;
        if (kept_dev < kept && p_dev <= p_eq) continue;
        const Rational k = p_eq / p_dev;
        if (kept_dev > kept && k <= Rational(1)) return EquilibriumCondition::none();
        clauses.push_back({kept_dev, k, kept});
    }
    if (clauses.empty()) return EquilibriumCondition::any();

    // A implies B when it has the larger left point and the smaller factor
    // (the right point is the same kept amount for every clause).
    auto implies = [](const EqCondition& a, const EqCondition& b) {
        return a.rhs_point == b.rhs_point && a.lhs_point >= b.lhs_point && a.factor <= b.factor;
    };
    std::vector<EqCondition> kept_clauses;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < clauses.size() && !redundant; ++j) {
            if (i == j || !implies(clauses[j], clauses[i])) continue;
            // Break exact duplicates by index so one copy survives.
            redundant = !implies(clauses[i], clauses[j]) || j < i;
        }
        if (!redundant) kept_clauses.push_back(clauses[i]);
    }
    return {EquilibriumCondition::Kind::inequality, std::move(kept_clauses)};
}

/// Totals the equilibrium analysis is organized around: 0 and the two
/// possible thresholds.
inline std::vector<Money> canonical_totals() { return {Money::euros(0), Money::euros(5), Money::euros(10)}; }

inline bool is_canonical_total(Money t) {
    for (Money c : canonical_totals())
        if (c == t) return true;
    return false;
}

/// Condition for the symmetric profile at a canonical total in the default
/// game, under maxmin (alpha = 1), maxmax (alpha = 0) or any mixture.
inline EquilibriumCondition condition_for(Treatment label, Rational alpha, Money target_total,
                                          const GameSpec& game = default_game()) {
    if (!is_canonical_total(target_total))
        throw InvalidInput("condition_for needs a canonical total (0, 5 or 10), got " + target_total.to_string());
    return derive_condition(build_success_curve(make_scenario(label), alpha, game), game, target_total);
}

} // namespace pgg
