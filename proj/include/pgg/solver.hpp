#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pgg/curve.hpp"
#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/preferences.hpp"
#include "pgg/scenario.hpp"
#include "pgg/utility.hpp"

namespace pgg {

struct Profile {
    std::vector<Money> contributions;

    static Profile symmetric(int n, Money c) { return {std::vector<Money>(static_cast<std::size_t>(n), c)}; }

    Money total() const {
        Money t;
        for (Money c : contributions) t += c;
        return t;
    }
    bool is_symmetric() const {
        return std::all_of(contributions.begin(), contributions.end(),
                           [&](Money c) { return c == contributions.front(); });
    }
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < contributions.size(); ++i) s += (i ? "," : "") + contributions[i].to_string();
        return s + ")";
    }
    friend bool operator==(const Profile&, const Profile&) = default;
    friend auto operator<=>(const Profile& a, const Profile& b) { return a.contributions <=> b.contributions; }
};

enum class EqKind { strict, weak };

inline std::string to_string(EqKind k) { return k == EqKind::strict ? "strict" : "weak"; }

struct EquilibriumRecord {
    Profile profile;
    Money total;
    EqKind kind = EqKind::strict;
    bool zero_payoff = false;
    /// Some player's strategy is weakly dominated over every opponent total on the grid.
    bool weakly_dominated_strategy = false;
    /// Dropped by the paper-table selection (weak, zero payoff, asymmetric or non-canonical).
    bool paper_filter_excluded = false;
    std::optional<EquilibriumCondition> supporting_condition; ///< symmetric profiles only

    friend bool operator==(const EquilibriumRecord&, const EquilibriumRecord&) = default;
};

struct Deviation {
    Money contribution;
    double gain = 0.0;
};

enum class FilterMode { raw, paper };

inline FilterMode parse_filter_mode(std::string_view s) {
    if (s == "raw") return FilterMode::raw;
    if (s == "paper") return FilterMode::paper;
    throw InvalidInput("unknown mode '" + std::string(s) + "' (expected raw or paper)");
}

/// Payoff of own grid contribution i against opponents' total (in grid
/// steps) j, tabulated once per (curve, u, game).
class PayoffGrid {
public:
    PayoffGrid(const SuccessCurve& curve, const UtilityFn& u, const GameSpec& game) : game_(game) {
        game.validate();
        if (curve.upper_bound() < game.max_total())
            throw InvalidInput("success curve domain ends below the game's maximum total");
        points_ = game.grid_size();
        others_ = static_cast<std::size_t>(game.n_players - 1) * (points_ - 1) + 1;
        values_.resize(points_ * others_);
        for (std::size_t i = 0; i < points_; ++i) {
            const Money c = game.grid_point(i);
            const double kept = u(game.endowment - c);
            for (std::size_t j = 0; j < others_; ++j)
                values_[i * others_ + j] = kept * curve(c + game.grid_point(j)).to_double();
        }
        compute_dominance();
    }

    std::size_t points() const { return points_; }
    std::size_t opponent_totals() const { return others_; }
    const GameSpec& game() const { return game_; }

    double payoff(std::size_t own, std::size_t others) const { return values_[own * others_ + others]; }

    std::size_t index_of(Money c) const {
        if (c < Money{} || c > game_.endowment || !game_.on_grid(c))
            throw InvalidInput("contribution " + c.to_string() + " is not a grid point in [0, endowment]");
        return static_cast<std::size_t>(c.cents() / game_.grid_step.cents());
    }

    /// Weakly dominated by some other grid strategy over all opponent totals.
    bool dominated(std::size_t own) const { return dominated_[own]; }

private:
    void compute_dominance() {
        dominated_.assign(points_, false);
        for (std::size_t a = 0; a < points_; ++a) {
            for (std::size_t b = 0; b < points_ && !dominated_[a]; ++b) {
                if (a == b) continue;
                bool never_worse = true, sometimes_better = false;
                for (std::size_t j = 0; j < others_ && never_worse; ++j) {
                    const double pa = payoff(a, j), pb = payoff(b, j);
                    if (payoff_tie(pa, pb)) continue;
                    if (pb > pa) sometimes_better = true;
                    else never_worse = false;
                }
                dominated_[a] = never_worse && sometimes_better;
            }
        }
    }

    GameSpec game_;
    std::size_t points_ = 0;
    std::size_t others_ = 0;
    std::vector<double> values_;
    std::vector<bool> dominated_;
};

namespace detail {

inline void validate_profile(const Profile& p, const GameSpec& game) {
    if (static_cast<int>(p.contributions.size()) != game.n_players)
        throw InvalidInput("profile has " + std::to_string(p.contributions.size()) + " entries, game has " +
                           std::to_string(game.n_players) + " players");
    for (Money c : p.contributions)
        if (c < Money{} || c > game.endowment || !game.on_grid(c))
            throw InvalidInput("profile entry " + c.to_string() + " is not a grid contribution");
}

inline Deviation best_deviation(const PayoffGrid& g, const std::vector<std::size_t>& idx, Money total_steps_money,
                                std::size_t player) {
    const auto& game = g.game();
    const std::size_t total = static_cast<std::size_t>(total_steps_money.cents() / game.grid_step.cents());
    const std::size_t own = idx[player];
    const std::size_t others = total - own;
    const double current = g.payoff(own, others);
    std::size_t best = own;
    double best_pay = current;
    for (std::size_t s = 0; s < g.points(); ++s) {
        const double p = g.payoff(s, others);
        if (p > best_pay && !payoff_tie(p, best_pay)) {
            best = s;
            best_pay = p;
        }
    }
    return {game.grid_point(best), best == own ? 0.0 : best_pay - current};
}

inline std::optional<EquilibriumRecord> classify(const PayoffGrid& g, const SuccessCurve& curve,
                                                 const Profile& profile) {
    const auto& game = g.game();
    std::vector<std::size_t> idx;
    idx.reserve(profile.contributions.size());
    for (Money c : profile.contributions) idx.push_back(g.index_of(c));
    const Money total = profile.total();
    const std::size_t total_steps = static_cast<std::size_t>(total.cents() / game.grid_step.cents());

    EquilibriumRecord rec;
    rec.profile = profile;
    rec.total = total;
    bool all_zero = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::size_t others = total_steps - idx[i];
        const double current = g.payoff(idx[i], others);
        if (current != 0.0) all_zero = false;
        for (std::size_t s = 0; s < g.points(); ++s) {
            if (s == idx[i]) continue;
            const double p = g.payoff(s, others);
            if (payoff_tie(p, current)) rec.kind = EqKind::weak;
            else if (p > current) return std::nullopt;
        }
        if (g.dominated(idx[i])) rec.weakly_dominated_strategy = true;
    }
    rec.zero_payoff = all_zero;
    const bool symmetric = profile.is_symmetric();
    rec.paper_filter_excluded =
        rec.kind == EqKind::weak || rec.zero_payoff || !symmetric || !is_canonical_total(total);
    if (symmetric) rec.supporting_condition = derive_condition(curve, game, total);
    return rec;
}

} // namespace detail

/// Payoff-maximizing contribution for `player` holding the others fixed.
/// Returns the current contribution with gain 0 when nothing beats it;
/// among equally good improvements the smallest contribution wins.
inline Deviation best_deviation(const Profile& profile, std::size_t player, const SuccessCurve& curve,
                                const UtilityFn& u, const GameSpec& game) {
    detail::validate_profile(profile, game);
    if (player >= profile.contributions.size()) throw InvalidInput("player index out of range");
    PayoffGrid g(curve, u, game);
    std::vector<std::size_t> idx;
    for (Money c : profile.contributions) idx.push_back(g.index_of(c));
    return detail::best_deviation(g, idx, profile.total(), player);
}

/// Equilibrium record for a Nash profile, nullopt otherwise.
inline std::optional<EquilibriumRecord> classify_profile(const Profile& profile, const SuccessCurve& curve,
                                                         const UtilityFn& u, const GameSpec& game) {
    detail::validate_profile(profile, game);
    return detail::classify(PayoffGrid(curve, u, game), curve, profile);
}

inline bool passes_paper_filter(const EquilibriumRecord& r) { return !r.paper_filter_excluded; }

/// Symmetric pure equilibria, sorted by total. Paper mode keeps strict,
/// positive-payoff equilibria at the canonical totals.
inline std::vector<EquilibriumRecord> enumerate_symmetric(const SuccessCurve& curve, const UtilityFn& u,
                                                          const GameSpec& game, FilterMode mode) {
    PayoffGrid g(curve, u, game);
    std::vector<EquilibriumRecord> out;
    for (Money c : game.grid()) {
        auto rec = detail::classify(g, curve, Profile::symmetric(game.n_players, c));
        if (!rec) continue;
        if (mode == FilterMode::paper && !passes_paper_filter(*rec)) continue;
        out.push_back(std::move(*rec));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.total < b.total; });
    return out;
}

inline constexpr std::uint64_t default_profile_cap = 7776; // 6^5

/// Every pure Nash profile on the grid, sorted lexicographically. Work is
/// split by profile index across `workers` threads; output does not depend
/// on the worker count.
inline std::vector<EquilibriumRecord> enumerate_all_profiles(const SuccessCurve& curve, const UtilityFn& u,
                                                             const GameSpec& game,
                                                             std::uint64_t cap = default_profile_cap,
                                                             unsigned workers = 1) {
    PayoffGrid g(curve, u, game);
    const std::uint64_t base = g.points();
    std::uint64_t count = 1;
    for (int i = 0; i < game.n_players; ++i) {
        if (count > std::numeric_limits<std::uint64_t>::max() / base)
            throw CapExceeded(std::numeric_limits<std::uint64_t>::max(), cap);
        count *= base;
    }
    if (count > cap) throw CapExceeded(count, cap);

    workers = std::max(1u, workers);
    std::vector<std::vector<EquilibriumRecord>> parts(workers);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = count * w / workers, hi = count * (w + 1) / workers;
        Profile p{std::vector<Money>(static_cast<std::size_t>(game.n_players))};
        for (std::uint64_t k = lo; k < hi; ++k) {
            std::uint64_t rest = k;
            for (int i = game.n_players - 1; i >= 0; --i) {
                p.contributions[static_cast<std::size_t>(i)] = game.grid_point(static_cast<std::size_t>(rest % base));
                rest /= base;
            }
            if (auto rec = detail::classify(g, curve, p)) parts[w].push_back(std::move(*rec));
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    std::vector<EquilibriumRecord> out;
    for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(out));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.profile < b.profile; });
    return out;
}

// --- tables ---------------------------------------------------------------

/// Y/blank grid: rows are canonical totals, columns treatments.
struct EquilibriumTable {
    std::vector<Treatment> columns{table_order.begin(), table_order.end()};
    std::vector<Money> rows = canonical_totals();
    std::map<Treatment, std::vector<Money>> totals; ///< equilibrium totals per column

    bool cell(Money row, Treatment col) const {
        auto it = totals.find(col);
        if (it == totals.end()) return false;
        return std::find(it->second.begin(), it->second.end(), row) != it->second.end();
    }

    std::string render_text() const {
        const std::string head = "Equilibrium/Treatment";
        std::string out = head;
        for (auto t : columns) out += "  " + to_string(t);
        out += '\n';
        for (Money r : rows) {
            std::string line = "C=" + r.to_string();
            line.resize(head.size(), ' ');
            for (auto t : columns) line += cell(r, t) ? "  Y " : "    ";
            while (line.back() == ' ') line.pop_back();
            out += line + '\n';
        }
        return out;
    }

    std::string render_csv() const {
        std::string out = "total";
        for (auto t : columns) out += "," + to_string(t);
        out += '\n';
        for (Money r : rows) {
            out += r.to_string();
            for (auto t : columns) out += std::string(",") + (cell(r, t) ? "Y" : "");
            out += '\n';
        }
        return out;
    }
};

inline std::vector<Money> paper_totals(const SuccessCurve& curve, const UtilityFn& u, const GameSpec& game) {
    std::vector<Money> out;
    for (const auto& r : enumerate_symmetric(curve, u, game, FilterMode::paper)) out.push_back(r.total);
    return out;
}

/// Paper-mode table for one utility function.
inline EquilibriumTable equilibrium_table(Rational alpha, const UtilityFn& u, const GameSpec& game = default_game()) {
    EquilibriumTable t;
    for (auto tr : t.columns) t.totals[tr] = paper_totals(build_success_curve(make_scenario(tr), alpha, game), u, game);
    return t;
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t samples) {
    if (samples == 0) throw InvalidInput("rho sample set is empty");
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidInput("rho range must satisfy 0 < lo <= hi");
    if (samples == 1) return {lo};
    std::vector<double> out(samples);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < samples; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

struct RhoSweep {
    double lo = 0.2;
    double hi = 10.0;
    std::size_t samples = 100;
};

/// A cell is Y iff the total is a paper-mode equilibrium for every sampled
/// power utility.
inline EquilibriumTable robust_table(const std::vector<AmbiguityScenario>& scenarios, Rational alpha,
                                     const RhoSweep& sweep = {}, const GameSpec& game = default_game()) {
    const auto rhos = log_spaced(sweep.lo, sweep.hi, sweep.samples);
    EquilibriumTable t;
    t.columns.clear();
    for (const auto& s : scenarios) {
        t.columns.push_back(s.label);
        const auto curve = build_success_curve(s, alpha, game);
        std::vector<Money> robust = canonical_totals();
        for (double rho : rhos) {
            const auto ok = paper_totals(curve, UtilityFn::power(rho), game);
            std::erase_if(robust, [&](Money m) { return std::find(ok.begin(), ok.end(), m) == ok.end(); });
            if (robust.empty()) break;
        }
        t.totals[s.label] = robust;
    }
    return t;
}

inline std::vector<AmbiguityScenario> canonical_scenarios() {
    std::vector<AmbiguityScenario> out;
    for (auto t : table_order) out.push_back(make_scenario(t));
    return out;
}

// --- CSV of records ---------------------------------------------------------

inline std::string format_rho(double r) {
    if (std::isinf(r)) return r > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

inline std::string records_csv_header() {
    return "treatment,profile,total,kind,zero_payoff,dominated_textbook,paper_excluded,condition,rho_threshold\n";
}

inline std::string records_csv_rows(Treatment t, const std::vector<EquilibriumRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        std::string cond, rho;
        if (r.supporting_condition) {
            cond = r.supporting_condition->to_string();
            try {
                rho = format_rho(power_threshold(*r.supporting_condition));
            } catch (const InvalidInput&) {
                rho = "";
            }
        }
        std::string prof = r.profile.to_string();
        std::replace(prof.begin(), prof.end(), ',', ' ');
        out += to_string(t) + "," + prof + "," + r.total.to_string() + "," + to_string(r.kind) + "," +
               (r.zero_payoff ? "1" : "0") + "," + (r.weakly_dominated_strategy ? "1" : "0") + "," +
               (r.paper_filter_excluded ? "1" : "0") + ",\"" + cond + "\"," + rho + "\n";
    }
    return out;
}

} // namespace pgg
