#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/errors.hpp"
#include "pgg/rng.hpp"

namespace pgg {

/// Survey scores of one participant. Discrete scores are stored as integers
/// held in doubles so a row converts straight into regressors.
struct CovariateProfile {
    double age = 0;
    double female = 0;
    double education = 1;
    double patience = 0;
    double crt = 0;
    double math_ability = 0;
    double altruism = 0;
    double envy = 0;
    double ideology = 1;
    double gravity = 1;
    double number_actions = 1;
    double unemployed = 0;
    double social_transfer = 0;
    double risk_aversion = 0;
    double ambiguity_aversion = 0;

    friend bool operator==(const CovariateProfile&, const CovariateProfile&) = default;
};

struct CovariateField {
    std::string_view name;
    double CovariateProfile::*member;
    double min;
    double max;
    bool discrete;
};

/// Column order used everywhere (CSV, frames, balance tables).
inline constexpr std::array<CovariateField, 15> covariate_fields{{
    {"age", &CovariateProfile::age, 18, 74, true},
    {"female", &CovariateProfile::female, 0, 1, true},
    {"education", &CovariateProfile::education, 1, 5, true},
    {"patience", &CovariateProfile::patience, 0, 6, true},
    {"crt", &CovariateProfile::crt, 0, 3, true},
    {"math_ability", &CovariateProfile::math_ability, 0, 3, true},
    {"altruism", &CovariateProfile::altruism, 0, 3, true},
    {"envy", &CovariateProfile::envy, 0, 4, true},
    {"ideology", &CovariateProfile::ideology, 1, 10, true},
    {"gravity", &CovariateProfile::gravity, 1, 10, true},
    {"number_actions", &CovariateProfile::number_actions, 1, 11, true},
    {"unemployed", &CovariateProfile::unemployed, 0, 1, true},
    {"social_transfer", &CovariateProfile::social_transfer, 0, 1, true},
    {"risk_aversion", &CovariateProfile::risk_aversion, -0.1, 1, false},
    {"ambiguity_aversion", &CovariateProfile::ambiguity_aversion, -2, 2, false},
}};

/// Throws unless every field lies in its range and discrete fields are whole.
inline void validate(const CovariateProfile& c) {
    for (const auto& f : covariate_fields) {
        const double v = c.*f.member;
        if (!(v >= f.min && v <= f.max))
            throw InvalidInput(std::string(f.name) + " = " + std::to_string(v) + " outside [" + std::to_string(f.min) +
                               ", " + std::to_string(f.max) + "]");
        if (f.discrete && v != std::floor(v)) throw InvalidInput(std::string(f.name) + " must be integer-valued");
    }
}

/// Normal draw rounded to the nearest integer and clipped to [lo, hi].
struct RoundedNormal {
    double mean;
    double sd;
    double lo;
    double hi;
};

/// Parameters of the covariate generator. Discrete scores are rounded,
/// clipped normals; binary flags are Bernoulli. Risk aversion is a normal
/// censored to [-0.1, 1] (most mass piles up at -0.1); ambiguity aversion is
/// a soft-thresholded normal (a point mass at 0) clipped to [-2, 2]. The two
/// latent normals are joined by a Gaussian copula.
struct CovariateModel {
    RoundedNormal age{43.84, 14.06, 18, 74};
    double female_share = 0.52;
    RoundedNormal education{2.95, 1.34, 1, 5};
    RoundedNormal patience{3.37, 2.17, 0, 6};
    RoundedNormal crt{1.59, 0.97, 0, 3};
    RoundedNormal math_ability{2.11, 0.87, 0, 3};
    RoundedNormal altruism{1.64, 0.77, 0, 3};
    RoundedNormal envy{2.16, 1.30, 0, 4};
    RoundedNormal ideology{4.92, 2.31, 1, 10};
    RoundedNormal gravity{7.69, 1.78, 1, 10};
    RoundedNormal number_actions{4.59, 2.21, 1, 11};
    double unemployed_share = 0.12;
    double social_transfer_share = 0.19;

    double risk_location = -0.58516;
    double risk_scale = 0.85527;
    double ambiguity_location = 0.02647;
    double ambiguity_scale = 0.61808;
    double ambiguity_dead_zone = 0.2;
    /// Correlation of the latent normals; about -0.41 after censoring.
    double latent_correlation = -0.565;

    void validate() const {
        auto share = [](double p, const char* what) {
            if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput(std::string(what) + " must lie in [0,1]");
        };
        share(female_share, "female_share");
        share(unemployed_share, "unemployed_share");
        share(social_transfer_share, "social_transfer_share");
        if (!(latent_correlation >= -1.0 && latent_correlation <= 1.0))
            throw InvalidInput("latent_correlation must lie in [-1,1]");
        if (!(risk_scale >= 0.0) || !(ambiguity_scale >= 0.0) || !(ambiguity_dead_zone >= 0.0))
            throw InvalidInput("covariate scales must be non-negative");
        for (const auto* r : {&age, &education, &patience, &crt, &math_ability, &altruism, &envy, &ideology, &gravity,
                              &number_actions})
            if (!(r->sd >= 0.0) || r->lo > r->hi) throw InvalidInput("rounded normal needs sd >= 0 and lo <= hi");
    }
};

namespace detail {
inline double draw(Rng& rng, const RoundedNormal& r) {
    return std::clamp(std::round(rng.normal(r.mean, r.sd)), r.lo, r.hi);
}
} // namespace detail

/// One participant's covariates from a dedicated generator.
inline CovariateProfile draw_covariates(Rng& rng, const CovariateModel& m = {}) {
    CovariateProfile c;
    const double z1 = rng.normal();
    const double zb = rng.normal();
    const double z2 = m.latent_correlation * z1 + std::sqrt(1.0 - m.latent_correlation * m.latent_correlation) * zb;
    c.risk_aversion = std::clamp(m.risk_location + m.risk_scale * z1, -0.1, 1.0);
    const double w = m.ambiguity_location + m.ambiguity_scale * z2;
    const double shrunk = std::max(std::abs(w) - m.ambiguity_dead_zone, 0.0);
    c.ambiguity_aversion = shrunk == 0.0 ? 0.0 : std::clamp(std::copysign(shrunk, w), -2.0, 2.0);

    // Stored at the precision the CSV carries, so a written and re-read
    // dataset is bit-identical.
    c.risk_aversion = std::round(c.risk_aversion * 1e6) / 1e6;
    c.ambiguity_aversion = std::round(c.ambiguity_aversion * 1e6) / 1e6;
    if (c.ambiguity_aversion == 0.0) c.ambiguity_aversion = 0.0;

    c.age = detail::draw(rng, m.age);
    c.female = rng.bernoulli(m.female_share) ? 1 : 0;
    c.education = detail::draw(rng, m.education);
    c.patience = detail::draw(rng, m.patience);
    c.crt = detail::draw(rng, m.crt);
    c.math_ability = detail::draw(rng, m.math_ability);
    c.altruism = detail::draw(rng, m.altruism);
    c.envy = detail::draw(rng, m.envy);
    c.ideology = detail::draw(rng, m.ideology);
    c.gravity = detail::draw(rng, m.gravity);
    c.number_actions = detail::draw(rng, m.number_actions);
    c.unemployed = rng.bernoulli(m.unemployed_share) ? 1 : 0;
    c.social_transfer = rng.bernoulli(m.social_transfer_share) ? 1 : 0;
    return c;
}

/// n profiles; profile i uses substream (seed, covariates, i).
inline std::vector<CovariateProfile> synth_covariates(std::size_t n, std::uint64_t seed, const CovariateModel& m = {}) {
    if (n == 0) throw InvalidInput("synth_covariates needs n >= 1");
    m.validate();
    std::vector<CovariateProfile> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(seed, StreamPurpose::covariates, i);
        out.push_back(draw_covariates(rng, m));
    }
    return out;
}

inline nlohmann::json to_json(const CovariateProfile& c) {
    nlohmann::json j;
    for (const auto& f : covariate_fields) j[std::string(f.name)] = c.*f.member;
    return j;
}

} // namespace pgg
