#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/behavior.hpp"
#include "pgg/covariates.hpp"
#include "pgg/errors.hpp"
#include "pgg/simulator.hpp"

namespace pgg {

// JSON mapping for the simulator configuration. Readers start from the
// defaults and override the keys present; unknown keys are errors so typos
// surface as field diagnostics.

namespace detail {

template <class Self, class F>
void visit_linear(Self& r, F&& f) {
    f("intercept", r.intercept);
    f("belief", r.belief);
    f("age", r.age);
    f("female", r.female);
    f("education", r.education);
    f("altruism", r.altruism);
    f("envy", r.envy);
    f("ideology", r.ideology);
    f("gravity", r.gravity);
    f("number_actions", r.number_actions);
    f("social_transfer", r.social_transfer);
    f("crt", r.crt);
    f("unemployed", r.unemployed);
    f("risk_aversion", r.risk_aversion);
    f("ambiguity_aversion", r.ambiguity_aversion);
    f("pivotal", r.pivotal);
    f("perception_accuracy", r.perception_accuracy);
    f("pivotal_x_accuracy", r.pivotal_x_accuracy);
}

template <class Self, class F>
void visit_noise(Self& n, F&& f) {
    f("generous_share", n.generous_share);
    f("shift", n.shift);
    f("low_sd", n.low_sd);
    f("high_sd", n.high_sd);
}

template <class Self, class F>
void visit_belief(Self& b, F&& f) {
    f("intercept", b.intercept);
    f("education", b.education);
    f("altruism", b.altruism);
    f("gravity", b.gravity);
    f("number_actions", b.number_actions);
    f("crt", b.crt);
    f("risk_aversion", b.risk_aversion);
    f("ambiguity_aversion", b.ambiguity_aversion);
    f("noise_sd", b.noise_sd);
}

template <class Self, class F>
void visit_covariates(Self& m, F&& f) {
    f("female_share", m.female_share);
    f("unemployed_share", m.unemployed_share);
    f("social_transfer_share", m.social_transfer_share);
    f("risk_location", m.risk_location);
    f("risk_scale", m.risk_scale);
    f("ambiguity_location", m.ambiguity_location);
    f("ambiguity_scale", m.ambiguity_scale);
    f("ambiguity_dead_zone", m.ambiguity_dead_zone);
    f("latent_correlation", m.latent_correlation);
}

template <class Self, class F>
void visit_rounded(Self& m, F&& f) {
    f("age", m.age);
    f("education", m.education);
    f("patience", m.patience);
    f("crt", m.crt);
    f("math_ability", m.math_ability);
    f("altruism", m.altruism);
    f("envy", m.envy);
    f("ideology", m.ideology);
    f("gravity", m.gravity);
    f("number_actions", m.number_actions);
}

inline void check_keys(const nlohmann::json& j, const std::string& where, const std::vector<std::string>& allowed) {
    if (!j.is_object()) throw InvalidInput(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw InvalidInput(where + ": unknown field '" + k + "'");
}

inline double get_number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw InvalidInput(where + ": expected a number");
    return j.get<double>();
}

template <class T, class Visit>
nlohmann::json scalars_to_json(const T& obj, Visit visit) {
    nlohmann::json j = nlohmann::json::object();
    visit(obj, [&](const char* name, const double& v) { j[name] = v; });
    return j;
}

template <class T, class Visit>
void scalars_from_json(T& obj, const nlohmann::json& j, const std::string& where, Visit visit,
                       std::vector<std::string> extra_keys = {}) {
    std::vector<std::string> keys = std::move(extra_keys);
    visit(obj, [&](const char* name, double&) { keys.emplace_back(name); });
    check_keys(j, where, keys);
    visit(obj, [&](const char* name, double& v) {
        if (j.contains(name)) v = get_number(j.at(name), where + "." + name);
    });
}

inline nlohmann::json arm_array_to_json(const ArmArray& a) {
    nlohmann::json j = nlohmann::json::object();
    for (auto t : all_treatments) j[to_string(t)] = a[arm_index(t)];
    return j;
}

inline void arm_array_from_json(ArmArray& a, const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw InvalidInput(where + ": expected an object keyed by arm");
    for (const auto& [k, v] : j.items()) {
        Treatment t;
        try {
            t = parse_treatment(k);
        } catch (const InvalidInput&) {
            throw InvalidInput(where + ": unknown arm '" + k + "'");
        }
        a[arm_index(t)] = get_number(v, where + "." + k);
    }
}

inline std::string get_string(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) throw InvalidInput(where + ": expected a string");
    return j.get<std::string>();
}

/// Decimal given either as a JSON string ("0.5", "1/3") or a number.
inline Rational get_rational(const nlohmann::json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
        if (j.is_number()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
            return Rational::parse(buf);
        }
    } catch (const InvalidInput& e) {
        throw InvalidInput(where + ": " + e.what());
    }
    throw InvalidInput(where + ": expected a decimal number or string");
}

inline Money get_money(const nlohmann::json& j, const std::string& where) {
    try {
        if (j.is_string()) return Money::parse(j.get<std::string>());
        if (j.is_number()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", j.get<double>());
            return Money::parse(buf);
        }
    } catch (const InvalidInput& e) {
        throw InvalidInput(where + ": " + e.what());
    }
    throw InvalidInput(where + ": expected an amount");
}

} // namespace detail

inline nlohmann::json to_json(const BehavioralRule& r) {
    nlohmann::json j;
    j["kind"] = to_string(r.kind);
    switch (r.kind) {
    case BehavioralRule::Kind::paper_calibrated_linear: {
        auto lin = detail::scalars_to_json(r.linear, [](auto& o, auto&& f) { detail::visit_linear(o, f); });
        lin["arm_effect"] = detail::arm_array_to_json(r.linear.arm_effect);
        lin["arm_risk_slope"] = detail::arm_array_to_json(r.linear.arm_risk_slope);
        lin["arm_ambiguity_slope"] = detail::arm_array_to_json(r.linear.arm_ambiguity_slope);
        lin["noise"] = detail::scalars_to_json(r.linear.noise, [](auto& o, auto&& f) { detail::visit_noise(o, f); });
        j["linear"] = lin;
        break;
    }
    case BehavioralRule::Kind::belief_best_responder:
    case BehavioralRule::Kind::equilibrium_selector:
        if (r.preferences.rho) j["rho"] = *r.preferences.rho;
        if (r.preferences.alpha) j["alpha"] = r.preferences.alpha->to_string();
        if (r.kind == BehavioralRule::Kind::equilibrium_selector)
            j["pick"] = r.pick == EquilibriumPick::lowest ? "lowest" : "highest";
        break;
    case BehavioralRule::Kind::altruist_fixed: j["fixed"] = r.fixed.to_string(); break;
    }
    return j;
}

/// Keys present in `j` override `base`.
inline BehavioralRule rule_from_json(const nlohmann::json& j, const std::string& where = "rule", BehavioralRule base = {}) {
    detail::check_keys(j, where, {"kind", "linear", "rho", "alpha", "pick", "fixed"});
    BehavioralRule r = std::move(base);
    if (j.contains("kind")) r.kind = parse_rule_kind(detail::get_string(j.at("kind"), where + ".kind"));
    if (j.contains("linear")) {
        const auto& l = j.at("linear");
        const std::string lw = where + ".linear";
        detail::scalars_from_json(r.linear, l, lw, [](auto& o, auto&& f) { detail::visit_linear(o, f); },
                                  {"arm_effect", "arm_risk_slope", "arm_ambiguity_slope", "noise"});
        if (l.contains("arm_effect")) detail::arm_array_from_json(r.linear.arm_effect, l.at("arm_effect"), lw + ".arm_effect");
        if (l.contains("arm_risk_slope"))
            detail::arm_array_from_json(r.linear.arm_risk_slope, l.at("arm_risk_slope"), lw + ".arm_risk_slope");
        if (l.contains("arm_ambiguity_slope"))
            detail::arm_array_from_json(r.linear.arm_ambiguity_slope, l.at("arm_ambiguity_slope"),
                                        lw + ".arm_ambiguity_slope");
        if (l.contains("noise"))
            detail::scalars_from_json(r.linear.noise, l.at("noise"), lw + ".noise",
                                      [](auto& o, auto&& f) { detail::visit_noise(o, f); });
    }
    if (j.contains("rho")) r.preferences.rho = detail::get_number(j.at("rho"), where + ".rho");
    if (j.contains("alpha")) r.preferences.alpha = detail::get_rational(j.at("alpha"), where + ".alpha");
    if (j.contains("pick")) {
        const auto p = detail::get_string(j.at("pick"), where + ".pick");
        if (p == "lowest") r.pick = EquilibriumPick::lowest;
        else if (p == "highest") r.pick = EquilibriumPick::highest;
        else throw InvalidInput(where + ".pick: expected lowest or highest");
    }
    if (j.contains("fixed")) r.fixed = detail::get_money(j.at("fixed"), where + ".fixed");
    return r;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json arms = nlohmann::json::array();
    for (auto t : c.arms) arms.push_back(to_string(t));
    auto cov = detail::scalars_to_json(c.covariates, [](auto& o, auto&& f) { detail::visit_covariates(o, f); });
    detail::visit_rounded(c.covariates, [&](const char* name, const RoundedNormal& r) {
        cov[name] = {{"mean", r.mean}, {"sd", r.sd}, {"min", r.lo}, {"max", r.hi}};
    });
    auto belief = detail::scalars_to_json(c.belief, [](auto& o, auto&& f) { detail::visit_belief(o, f); });
    belief["arm_shift"] = detail::arm_array_to_json(c.belief.arm_shift);
    return {{"n_subjects", c.n_subjects},
            {"arms", arms},
            {"grid_step", c.game.grid_step.to_string()},
            {"resolution", to_string(c.resolution)},
            {"remainder", to_string(c.remainder)},
            {"rule", to_json(c.rule)},
            {"belief", belief},
            {"covariates", cov}};
}

/// Applies the keys of `j` on top of `c`.
inline void apply_experiment_json(ExperimentConfig& c, const nlohmann::json& j, const std::string& where = "experiment") {
    detail::check_keys(j, where,
                       {"n_subjects", "arms", "grid_step", "resolution", "remainder", "rule", "belief", "covariates"});
    if (j.contains("n_subjects")) {
        const auto& v = j.at("n_subjects");
        if (!v.is_number_integer() || v.get<std::int64_t>() <= 0)
            throw InvalidInput(where + ".n_subjects: expected a positive integer");
        c.n_subjects = v.get<std::size_t>();
    }
    if (j.contains("arms")) {
        const auto& a = j.at("arms");
        if (!a.is_array() || a.empty()) throw InvalidInput(where + ".arms: expected a non-empty array of arm labels");
        c.arms.clear();
        for (const auto& x : a) c.arms.push_back(parse_treatment(detail::get_string(x, where + ".arms")));
    }
    if (j.contains("grid_step")) c.game.grid_step = detail::get_money(j.at("grid_step"), where + ".grid_step");
    if (j.contains("resolution"))
        c.resolution = parse_resolution_policy(detail::get_string(j.at("resolution"), where + ".resolution"));
    if (j.contains("remainder"))
        c.remainder = parse_remainder_policy(detail::get_string(j.at("remainder"), where + ".remainder"));
    if (j.contains("rule")) c.rule = rule_from_json(j.at("rule"), where + ".rule", c.rule);
    if (j.contains("belief")) {
        const auto& b = j.at("belief");
        detail::scalars_from_json(c.belief, b, where + ".belief", [](auto& o, auto&& f) { detail::visit_belief(o, f); },
                                  {"arm_shift"});
        if (b.contains("arm_shift")) detail::arm_array_from_json(c.belief.arm_shift, b.at("arm_shift"), where + ".belief.arm_shift");
    }
    if (j.contains("covariates")) {
        const auto& m = j.at("covariates");
        std::vector<std::string> rounded;
        detail::visit_rounded(c.covariates, [&](const char* name, RoundedNormal&) { rounded.emplace_back(name); });
        detail::scalars_from_json(c.covariates, m, where + ".covariates",
                                  [](auto& o, auto&& f) { detail::visit_covariates(o, f); }, rounded);
        detail::visit_rounded(c.covariates, [&](const char* name, RoundedNormal& r) {
            if (!m.contains(name)) return;
            const auto& x = m.at(name);
            const std::string w = where + ".covariates." + name;
            detail::check_keys(x, w, {"mean", "sd", "min", "max"});
            if (x.contains("mean")) r.mean = detail::get_number(x.at("mean"), w + ".mean");
            if (x.contains("sd")) r.sd = detail::get_number(x.at("sd"), w + ".sd");
            if (x.contains("min")) r.lo = detail::get_number(x.at("min"), w + ".min");
            if (x.contains("max")) r.hi = detail::get_number(x.at("max"), w + ".max");
        });
    }
}

} // namespace pgg
