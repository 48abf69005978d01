#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/behavior.hpp"
#include "pgg/covariates.hpp"
#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/money.hpp"
#include "pgg/rng.hpp"
#include "pgg/scenario.hpp"

namespace pgg {

// --- randomization ----------------------------------------------------------

enum class RemainderPolicy { reject, drop };

inline std::string to_string(RemainderPolicy p) { return p == RemainderPolicy::reject ? "reject" : "drop"; }
inline RemainderPolicy parse_remainder_policy(std::string_view s) {
    if (s == "reject") return RemainderPolicy::reject;
    if (s == "drop") return RemainderPolicy::drop;
    throw InvalidInput("unknown remainder policy '" + std::string(s) + "' (expected reject or drop)");
}

struct Assignment {
    std::int64_t subject_id = 0; ///< 1-based
    Treatment treatment = Treatment::RR;
    std::int64_t group_id = 0; ///< 1-based, numbered arm by arm
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Complete randomization with equal arm sizes: a seeded permutation of the
/// subjects is cut into equal blocks, one per arm. Inside an arm, subjects in
/// id order form consecutive groups of `group_size`. When n is not a multiple
/// of arms * group_size, `reject` throws and `drop` leaves the last subjects
/// of the permutation unassigned.
inline std::vector<Assignment> randomize(std::size_t n_subjects, const std::vector<Treatment>& arms, std::uint64_t seed,
                                         std::size_t group_size = 5,
                                         RemainderPolicy remainder = RemainderPolicy::reject) {
    if (arms.empty()) throw InvalidInput("randomize needs at least one arm");
    for (std::size_t i = 0; i < arms.size(); ++i)
        for (std::size_t j = i + 1; j < arms.size(); ++j)
            if (arms[i] == arms[j]) throw InvalidInput("arm " + to_string(arms[i]) + " listed twice");
    if (group_size == 0) throw InvalidInput("group size must be positive");
    if (n_subjects == 0) throw InvalidInput("randomize needs at least one subject");
    const std::size_t block = arms.size() * group_size;
    if (n_subjects % block != 0 && remainder == RemainderPolicy::reject)
        throw InvalidInput(std::to_string(n_subjects) + " subjects cannot be split into " +
                           std::to_string(arms.size()) + " arms of complete groups of " + std::to_string(group_size));
    const std::size_t used = n_subjects - n_subjects % block;
    if (used == 0) throw InvalidInput("too few subjects for one complete group per arm");
    const std::size_t per_arm = used / arms.size();

    std::vector<std::int64_t> perm(n_subjects);
    std::iota(perm.begin(), perm.end(), 1);
    Rng rng(seed, StreamPurpose::assignment, 0);
    for (std::size_t i = n_subjects; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    std::vector<Assignment> out;
    out.reserve(used);
    const std::int64_t groups_per_arm = static_cast<std::int64_t>(per_arm / group_size);
    for (std::size_t a = 0; a < arms.size(); ++a) {
        std::vector<std::int64_t> ids(perm.begin() + static_cast<std::ptrdiff_t>(a * per_arm),
                                      perm.begin() + static_cast<std::ptrdiff_t>((a + 1) * per_arm));
        std::sort(ids.begin(), ids.end());
        for (std::size_t k = 0; k < ids.size(); ++k)
            out.push_back({ids[k], arms[a],
                           static_cast<std::int64_t>(a) * groups_per_arm + static_cast<std::int64_t>(k / group_size) + 1});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.subject_id < y.subject_id; });
    return out;
}

// --- payoffs ----------------------------------------------------------------

/// How the experimenter resolves ambiguous parameters when paying subjects:
/// uniformly over the stated set or interval, or at the worst or best end.
enum class ResolutionPolicy { uniform, pessimistic, optimistic };

inline std::string to_string(ResolutionPolicy p) {
    switch (p) {
    case ResolutionPolicy::uniform: return "uniform";
    case ResolutionPolicy::pessimistic: return "pessimistic";
    case ResolutionPolicy::optimistic: return "optimistic";
    }
    return "?";
}

inline ResolutionPolicy parse_resolution_policy(std::string_view s) {
    for (auto p : {ResolutionPolicy::uniform, ResolutionPolicy::pessimistic, ResolutionPolicy::optimistic})
        if (s == to_string(p)) return p;
    throw InvalidInput("unknown resolution policy '" + std::string(s) + "' (expected uniform, pessimistic or optimistic)");
}

/// Expected success chance given the drawn threshold.
inline Rational success_probability(const AmbiguityScenario& s, ResolutionPolicy policy, Money threshold,
                                    Money group_total) {
    const ProbInterval& iv = group_total >= threshold ? s.p_success_if_met : s.p_success_if_unmet;
    switch (policy) {
    case ResolutionPolicy::pessimistic: return iv.lo;
    case ResolutionPolicy::optimistic: return iv.hi;
    case ResolutionPolicy::uniform: break;
    }
    return (iv.lo + iv.hi) / Rational(2);
}

/// Threshold distribution actually used for payment.
inline std::vector<std::pair<Money, Rational>> payment_threshold_law(const AmbiguityScenario& s,
                                                                     ResolutionPolicy policy) {
    const auto& th = s.threshold;
    std::vector<std::pair<Money, Rational>> law;
    if (!th.ambiguous) {
        for (std::size_t i = 0; i < th.support.size(); ++i) law.emplace_back(th.support[i], th.probs[i]);
        return law;
    }
    switch (policy) {
    case ResolutionPolicy::pessimistic: return {{th.support.back(), Rational(1)}};
    case ResolutionPolicy::optimistic: return {{th.support.front(), Rational(1)}};
    case ResolutionPolicy::uniform: break;
    }
    const Rational w(1, static_cast<std::int64_t>(th.support.size()));
    for (Money t : th.support) law.emplace_back(t, w);
    return law;
}

/// Ex-ante chance that a group with this total avoids the loss.
inline Rational group_success_probability(const AmbiguityScenario& s, ResolutionPolicy policy, Money group_total) {
    Rational p{0};
    for (const auto& [t, w] : payment_threshold_law(s, policy)) p += w * success_probability(s, policy, t, group_total);
    return p;
}

struct GroupOutcome {
    Money threshold;
    bool success = false;
};

/// Draw the threshold, then the loss event. Under the uniform policy an
/// ambiguous probability interval is itself drawn uniformly.
inline GroupOutcome draw_group_outcome(const AmbiguityScenario& s, ResolutionPolicy policy, Money group_total,
                                       Rng& rng) {
    const auto law = payment_threshold_law(s, policy);
    GroupOutcome out{law.back().first, false};
    const double u = rng.uniform();
    double acc = 0.0;
    for (const auto& [t, w] : law) {
        acc += w.to_double();
        if (u < acc) {
            out.threshold = t;
            break;
        }
    }
    const ProbInterval& iv = group_total >= out.threshold ? s.p_success_if_met : s.p_success_if_unmet;
    double p;
    if (policy == ResolutionPolicy::pessimistic) p = iv.lo.to_double();
    else if (policy == ResolutionPolicy::optimistic) p = iv.hi.to_double();
    else p = iv.is_point() ? iv.lo.to_double() : rng.uniform(iv.lo.to_double(), iv.hi.to_double());
    out.success = rng.uniform() < p;
    return out;
}

// --- records ----------------------------------------------------------------

struct SubjectRecord {
    std::int64_t subject_id = 0;
    Treatment treatment = Treatment::RR;
    std::int64_t group_id = 0;
    CovariateProfile covariates;
    double belief = 0.0; ///< expected total of the other members
    double perception_accuracy = 0.0;
    bool pivotal = false;
    Money contribution;
    Money group_total;
    Money threshold_drawn;
    bool success = false;
    Money earnings; ///< game earnings only

    friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;
};

/// Fill group_total, threshold_drawn, success and earnings. Group g draws
/// from substream (seed, payoff, g).
inline void realize_payoffs(std::vector<SubjectRecord>& records, ResolutionPolicy policy, std::uint64_t seed,
                            const GameSpec& game = default_game()) {
    std::map<std::int64_t, std::vector<SubjectRecord*>> groups;
    for (auto& r : records) groups[r.group_id].push_back(&r);
    for (auto& [gid, members] : groups) {
        if (static_cast<int>(members.size()) != game.n_players)
            throw InvalidInput("group " + std::to_string(gid) + " has " + std::to_string(members.size()) +
                               " members, expected " + std::to_string(game.n_players));
        Money total;
        for (const auto* m : members) {
            if (m->treatment != members.front()->treatment)
                throw InvalidInput("group " + std::to_string(gid) + " mixes treatments");
            total += m->contribution;
        }
        Rng rng(seed, StreamPurpose::payoff, static_cast<std::uint64_t>(gid));
        const auto outcome = draw_group_outcome(make_scenario(members.front()->treatment), policy, total, rng);
        for (auto* m : members) {
            m->group_total = total;
            m->threshold_drawn = outcome.threshold;
            m->success = outcome.success;
            m->earnings = outcome.success ? game.endowment - m->contribution : Money{};
        }
    }
}

// --- experiment -------------------------------------------------------------

struct ExperimentConfig {
    std::size_t n_subjects = 1500;
    std::vector<Treatment> arms{all_treatments.begin(), all_treatments.end()};
    GameSpec game;
    CovariateModel covariates;
    BeliefModel belief;
    BehavioralRule rule;
    ResolutionPolicy resolution = ResolutionPolicy::uniform;
    RemainderPolicy remainder = RemainderPolicy::reject;
    unsigned workers = 1;

    void validate() const {
        game.validate();
        covariates.validate();
        belief.validate();
        rule.validate(game);
        if (n_subjects == 0) throw InvalidInput("n_subjects must be positive");
        if (workers == 0) throw InvalidInput("workers must be positive");
    }
};

/// Simulated dataset, sorted by subject id. Output is a function of
/// (config, seed) only; `workers` changes nothing but speed.
inline std::vector<SubjectRecord> run_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto assignment =
        randomize(cfg.n_subjects, cfg.arms, seed, static_cast<std::size_t>(cfg.game.n_players), cfg.remainder);
    std::vector<SubjectRecord> records(assignment.size());

    auto build = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& a = assignment[i];
            const auto id = static_cast<std::uint64_t>(a.subject_id);
            SubjectRecord& r = records[i];
            r.subject_id = a.subject_id;
            r.treatment = a.treatment;
            r.group_id = a.group_id;
            Rng cov_rng(seed, StreamPurpose::covariates, id);
            r.covariates = draw_covariates(cov_rng, cfg.covariates);
            Rng belief_rng(seed, StreamPurpose::belief, id);
            r.belief = std::round(gen_belief(r.covariates, a.treatment, cfg.belief, belief_rng, cfg.game) * 1e6) / 1e6;
            r.pivotal = is_pivotal(r.belief);
            Rng acc_rng(seed, StreamPurpose::perception, id);
            r.perception_accuracy = std::round(acc_rng.uniform(0.0, 100.0) * 1e6) / 1e6;
            Rng c_rng(seed, StreamPurpose::contribution, id);
            r.contribution =
                gen_contribution(r.covariates, a.treatment, r.belief, cfg.rule, c_rng, cfg.game, r.perception_accuracy);
        }
    };
    const unsigned w = std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::size_t>(1, records.size())));
    if (w <= 1) {
        build(0, records.size());
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < w; ++k)
            pool.emplace_back(build, records.size() * k / w, records.size() * (k + 1) / w);
        for (auto& t : pool) t.join();
    }
    realize_payoffs(records, cfg.resolution, seed, cfg.game);
    return records;
}

// --- CSV --------------------------------------------------------------------

inline std::vector<std::string> record_columns() {
    std::vector<std::string> cols{"subject_id", "treatment", "group_id"};
    for (const auto& f : covariate_fields) cols.emplace_back(f.name);
    for (const char* c : {"belief", "perception_accuracy", "pivotal", "contribution", "group_total", "threshold_drawn",
                          "success", "earnings"})
        cols.emplace_back(c);
    return cols;
}

namespace detail {
inline std::string fmt_real(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    if (s == "-0.000000") s = "0.000000";
    return s;
}
inline std::string fmt_int(double v) { return std::to_string(static_cast<long long>(v)); }
} // namespace detail

inline void write_records_csv(std::ostream& os, const std::vector<SubjectRecord>& records) {
    const auto cols = record_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : records) {
        os << r.subject_id << ',' << to_string(r.treatment) << ',' << r.group_id;
        for (const auto& f : covariate_fields)
            os << ',' << (f.discrete ? detail::fmt_int(r.covariates.*f.member) : detail::fmt_real(r.covariates.*f.member));
        os << ',' << detail::fmt_real(r.belief) << ',' << detail::fmt_real(r.perception_accuracy) << ','
           << (r.pivotal ? 1 : 0) << ',' << r.contribution << ',' << r.group_total << ',' << r.threshold_drawn << ','
           << (r.success ? 1 : 0) << ',' << r.earnings << '\n';
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

/// Strict reader for the simulator schema; lines starting with '#' are
/// skipped.
inline std::vector<SubjectRecord> read_records_csv(std::istream& is) {
    const auto cols = record_columns();
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<SubjectRecord> out;
    auto num = [&](const std::string& s, const std::string& col) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != s.size())
            throw InvalidInput("line " + std::to_string(lineno) + ": column " + col + ": bad number '" + s + "'");
        return v;
    };
    auto flag = [&](const std::string& s, const std::string& col) {
        if (s == "0") return false;
        if (s == "1") return true;
        throw InvalidInput("line " + std::to_string(lineno) + ": column " + col + " must be 0 or 1");
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv_line(line);
        if (!header) {
            if (f != cols) throw InvalidInput("line " + std::to_string(lineno) + ": unexpected CSV header");
            header = true;
            continue;
        }
        if (f.size() != cols.size())
            throw InvalidInput("line " + std::to_string(lineno) + ": expected " + std::to_string(cols.size()) +
                               " fields, got " + std::to_string(f.size()));
        SubjectRecord r;
        std::size_t k = 0;
        r.subject_id = static_cast<std::int64_t>(num(f[k], cols[k])), ++k;
        r.treatment = parse_treatment(f[k++]);
        r.group_id = static_cast<std::int64_t>(num(f[k], cols[k])), ++k;
        for (const auto& cf : covariate_fields) r.covariates.*cf.member = num(f[k], cols[k]), ++k;
        r.belief = num(f[k], cols[k]), ++k;
        r.perception_accuracy = num(f[k], cols[k]), ++k;
        r.pivotal = flag(f[k], cols[k]), ++k;
        r.contribution = Money::parse(f[k++]);
        r.group_total = Money::parse(f[k++]);
        r.threshold_drawn = Money::parse(f[k++]);
        r.success = flag(f[k], cols[k]), ++k;
        r.earnings = Money::parse(f[k++]);
        out.push_back(r);
    }
    if (!header) throw InvalidInput("CSV has no header row");
    return out;
}

// --- summaries --------------------------------------------------------------

struct DatasetSummary {
    std::size_t n = 0;
    double mean_contribution = 0.0;
    double sd_contribution = 0.0;
    double share_below = 0.0; ///< below the reference amount
    double share_at = 0.0;
    double share_above = 0.0;
    double mean_belief = 0.0;
    double success_rate = 0.0;
    double mean_earnings = 0.0;
};

/// Contribution moments and the shares below, at and above `reference`.
inline DatasetSummary summarize(const std::vector<SubjectRecord>& records, Money reference = Money::euros(2)) {
    DatasetSummary s;
    s.n = records.size();
    if (records.empty()) return s;
    double sum = 0, sum2 = 0, below = 0, at = 0, above = 0, belief = 0, succ = 0, earn = 0;
    for (const auto& r : records) {
        const double c = r.contribution.to_euros();
        sum += c;
        sum2 += c * c;
        below += r.contribution < reference;
        at += r.contribution == reference;
        above += r.contribution > reference;
        belief += r.belief;
        succ += r.success;
        earn += r.earnings.to_euros();
    }
    const double n = static_cast<double>(records.size());
    s.mean_contribution = sum / n;
    s.sd_contribution = n > 1 ? std::sqrt(std::max(0.0, (sum2 - sum * sum / n) / (n - 1))) : 0.0;
    s.share_below = below / n;
    s.share_at = at / n;
    s.share_above = above / n;
    s.mean_belief = belief / n;
    s.success_rate = succ / n;
    s.mean_earnings = earn / n;
    return s;
}

} // namespace pgg
