#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pgg/errors.hpp"
#include "pgg/money.hpp"

namespace pgg {

/// The four arms. First letter: chance that a met threshold prevents the
/// loss; second letter: the threshold itself. R = risk, A = ambiguity.
enum class Treatment { RR, AR, RA, AA };

inline constexpr std::array<Treatment, 4> all_treatments{Treatment::RR, Treatment::AR, Treatment::RA,
                                                         Treatment::AA};

/// Column order of the equilibrium summary tables.
inline constexpr std::array<Treatment, 4> table_order{Treatment::RR, Treatment::RA, Treatment::AR,
                                                      Treatment::AA};

inline std::string to_string(Treatment t) {
    switch (t) {
    case Treatment::RR: return "RR";
    case Treatment::AR: return "AR";
    case Treatment::RA: return "RA";
    case Treatment::AA: return "AA";
    }
    return "?";
}

inline Treatment parse_treatment(std::string_view s) {
    if (s == "RR") return Treatment::RR;
    if (s == "AR") return Treatment::AR;
    if (s == "RA") return Treatment::RA;
    if (s == "AA") return Treatment::AA;
    throw InvalidInput("unknown treatment label '" + std::string(s) + "' (expected RR, AR, RA or AA)");
}

/// Players, endowment and contribution grid of the one-shot game.
struct GameSpec {
    int n_players = 5;
    Money endowment = Money::euros(5);
    Money grid_step = Money::euros(1);

    Money max_total() const { return endowment * n_players; }

    /// Number of grid points in [0, endowment].
    std::size_t grid_size() const { return static_cast<std::size_t>(endowment.cents() / grid_step.cents()) + 1; }

    Money grid_point(std::size_t i) const { return grid_step * static_cast<std::int64_t>(i); }

    std::vector<Money> grid() const {
        std::vector<Money> g;
        g.reserve(grid_size());
        for (std::size_t i = 0; i < grid_size(); ++i) g.push_back(grid_point(i));
        return g;
    }

    bool on_grid(Money m) const { return m.cents() % grid_step.cents() == 0; }

    void validate() const {
        if (n_players < 1) throw InvalidInput("n_players must be positive");
        if (grid_step.cents() <= 0) throw InvalidInput("grid_step must be positive");
        if (endowment.cents() <= 0) throw InvalidInput("endowment must be positive");
        if (endowment.cents() % grid_step.cents() != 0)
            throw InvalidInput("endowment " + endowment.to_string() + " is not a multiple of grid step " +
                               grid_step.to_string());
    }
};

/// Five players, 5 euro endowment, whole-euro contributions.
inline GameSpec default_game() { return GameSpec{}; }

} // namespace pgg
