#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/rational.hpp"

namespace pgg {

/// Closed probability interval [lo, hi]; a point value has lo == hi.
struct ProbInterval {
    Rational lo{0};
    Rational hi{0};

    static ProbInterval point(Rational p) { return {p, p}; }
    bool is_point() const { return lo == hi; }

    void validate() const {
        if (lo < Rational(0) || hi > Rational(1) || lo > hi)
            throw InvalidInput("probability interval [" + lo.to_string() + ", " + hi.to_string() +
                               "] must satisfy 0 <= lo <= hi <= 1");
    }
    friend bool operator==(const ProbInterval&, const ProbInterval&) = default;
};

/// Finite support of possible thresholds, either with known probabilities
/// or fully ambiguous (every distribution on the support is admissible).
struct ThresholdSpec {
    std::vector<Money> support;
    std::vector<Rational> probs; ///< empty when ambiguous
    bool ambiguous = false;

    void validate() const {
        if (support.empty()) throw InvalidInput("threshold support must not be empty");
        for (std::size_t i = 1; i < support.size(); ++i)
            if (!(support[i - 1] < support[i])) throw InvalidInput("threshold support must be strictly increasing");
        if (support.front() < Money{}) throw InvalidInput("thresholds must be non-negative");
        if (ambiguous) {
            if (!probs.empty()) throw InvalidInput("ambiguous threshold must not carry probabilities");
            return;
        }
        if (probs.size() != support.size()) throw InvalidInput("one probability per threshold is required");
        Rational sum{0};
        for (const auto& p : probs) {
            if (p < Rational(0) || p > Rational(1)) throw InvalidInput("threshold probability outside [0,1]");
            sum += p;
        }
        if (sum != Rational(1)) throw InvalidInput("threshold probabilities sum to " + sum.to_string() + ", not 1");
    }
    friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;
};

/// One treatment arm: uncertainty about the threshold and about the chance
/// that the loss is prevented when the threshold is / is not met.
struct AmbiguityScenario {
    Treatment label = Treatment::RR;
    ThresholdSpec threshold;
    ProbInterval p_success_if_met;
    ProbInterval p_success_if_unmet;

    void validate() const {
        threshold.validate();
        p_success_if_met.validate();
        p_success_if_unmet.validate();
        // Meeting the threshold must never lower the success chance, at either extreme.
        if (p_success_if_met.lo < p_success_if_unmet.lo || p_success_if_met.hi < p_success_if_unmet.hi)
            throw InvalidInput("success probability when the threshold is met must dominate the unmet case");
    }
    friend bool operator==(const AmbiguityScenario&, const AmbiguityScenario&) = default;
};

/// Canonical parameterization of an arm: thresholds 5 or 10 euros, success
/// 0.9 / 0.1 under risk, [0.8, 1] / [0, 0.2] under ambiguity.
inline AmbiguityScenario make_scenario(Treatment label) {
    AmbiguityScenario s;
    s.label = label;
    s.threshold.support = {Money::euros(5), Money::euros(10)};
    const bool ambiguous_threshold = label == Treatment::RA || label == Treatment::AA;
    const bool ambiguous_loss = label == Treatment::AR || label == Treatment::AA;
    s.threshold.ambiguous = ambiguous_threshold;
    if (!ambiguous_threshold) s.threshold.probs = {Rational(1, 2), Rational(1, 2)};
    if (ambiguous_loss) {
        s.p_success_if_met = {Rational(4, 5), Rational(1)};
        s.p_success_if_unmet = {Rational(0), Rational(1, 5)};
    } else {
        s.p_success_if_met = ProbInterval::point(Rational(9, 10));
        s.p_success_if_unmet = ProbInterval::point(Rational(1, 10));
    }
    return s;
}

inline AmbiguityScenario make_scenario(std::string_view label) { return make_scenario(parse_treatment(label)); }

// --- JSON -----------------------------------------------------------------
// Probabilities and amounts travel as decimal strings so they stay exact.

inline nlohmann::json to_json(const AmbiguityScenario& s) {
    nlohmann::json thresholds = nlohmann::json::array();
    for (std::size_t i = 0; i < s.threshold.support.size(); ++i) {
        nlohmann::json t{{"value", s.threshold.support[i].to_string()}};
        if (!s.threshold.ambiguous) t["prob"] = s.threshold.probs[i].to_string();
        thresholds.push_back(t);
    }
    return {{"label", to_string(s.label)},
            {"thresholds", thresholds},
            {"ambiguous_threshold", s.threshold.ambiguous},
            {"p_met", {s.p_success_if_met.lo.to_string(), s.p_success_if_met.hi.to_string()}},
            {"p_unmet", {s.p_success_if_unmet.lo.to_string(), s.p_success_if_unmet.hi.to_string()}}};
}

namespace detail {
inline std::string json_scalar_string(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    throw InvalidInput(std::string(what) + " must be a decimal string");
}

inline ProbInterval interval_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array() || j.size() != 2) throw InvalidInput(std::string(field) + " must be a [lo, hi] pair");
    ProbInterval p{Rational::parse(json_scalar_string(j[0], field)), Rational::parse(json_scalar_string(j[1], field))};
    p.validate();
    return p;
}
} // namespace detail

inline AmbiguityScenario scenario_from_json(const nlohmann::json& j) {
    try {
        AmbiguityScenario s;
        s.label = parse_treatment(j.at("label").get<std::string>());
        s.threshold.ambiguous = j.at("ambiguous_threshold").get<bool>();
        for (const auto& t : j.at("thresholds")) {
            s.threshold.support.push_back(Money::parse(detail::json_scalar_string(t.at("value"), "threshold value")));
            if (t.contains("prob")) {
                if (s.threshold.ambiguous) throw InvalidInput("ambiguous threshold entries must not carry 'prob'");
                s.threshold.probs.push_back(Rational::parse(detail::json_scalar_string(t.at("prob"), "prob")));
            }
        }
        s.p_success_if_met = detail::interval_from_json(j.at("p_met"), "p_met");
        s.p_success_if_unmet = detail::interval_from_json(j.at("p_unmet"), "p_unmet");
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("scenario JSON: ") + e.what());
    }
}

} // namespace pgg
