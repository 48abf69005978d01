#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "pgg/dataframe.hpp"
#include "pgg/errors.hpp"
#include "pgg/game.hpp"
#include "pgg/rng.hpp"

namespace pgg {

// --- design matrices --------------------------------------------------------

/// Regressors with named columns. Terms are column names, arm labels
/// ("AR", "RA", "AA", "RR": dummy for that arm of the `treatment` column)
/// or products "a*b" of such terms.
struct DesignMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::string response;
    std::vector<std::size_t> rows_used; ///< indices into the source frame
    std::size_t rows_dropped = 0;       ///< listwise deletions

    void validate() const {
        if (static_cast<std::size_t>(x.cols()) != names.size()) throw InvalidInput("design matrix names/columns mismatch");
        if (x.rows() != y.size()) throw InvalidInput("design matrix rows/response mismatch");
    }
};

inline const std::string intercept_name = "(Intercept)";

namespace detail {

inline std::vector<std::string> split_term(const std::string& term) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto star = term.find('*', start);
        parts.push_back(term.substr(start, star == std::string::npos ? std::string::npos : star - start));
        if (star == std::string::npos) break;
        start = star + 1;
    }
    for (const auto& p : parts)
        if (p.empty()) throw InvalidInput("malformed regression term '" + term + "'");
    return parts;
}

inline std::vector<double> factor_column(const DataFrame& f, const std::string& name) {
    if (f.has_numeric(name)) return f.numeric(name);
    if (f.has_string("treatment")) {
        bool is_arm = true;
        try {
            parse_treatment(name);
        } catch (const InvalidInput&) {
            is_arm = false;
        }
        if (is_arm) {
            const auto& arms = f.strings("treatment");
            std::vector<double> v(arms.size());
            for (std::size_t i = 0; i < arms.size(); ++i) v[i] = arms[i].empty() ? missing_value : (arms[i] == name ? 1.0 : 0.0);
            return v;
        }
    }
    throw InvalidInput("unknown regressor '" + name + "'");
}

} // namespace detail

inline std::vector<double> term_values(const DataFrame& f, const std::string& term) {
    std::vector<double> out;
    for (const auto& part : detail::split_term(term)) {
        auto v = detail::factor_column(f, part);
        if (out.empty()) out = std::move(v);
        else
            for (std::size_t i = 0; i < out.size(); ++i) out[i] *= v[i];
    }
    return out;
}

/// Listwise deletion over the response and every term.
inline DesignMatrix build_design(const DataFrame& f, const std::string& response, const std::vector<std::string>& terms,
                                 bool intercept = true) {
    std::vector<std::vector<double>> cols;
    for (const auto& t : terms) cols.push_back(term_values(f, t));
    const auto& y = f.numeric(response);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < f.rows(); ++i) {
        bool ok = !is_missing(y[i]);
        for (const auto& c : cols) ok = ok && !is_missing(c[i]);
        if (ok) keep.push_back(i);
    }
    DesignMatrix d;
    d.response = response;
    d.rows_used = keep;
    d.rows_dropped = f.rows() - keep.size();
    const auto k = terms.size() + (intercept ? 1 : 0);
    d.x.resize(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(k));
    d.y.resize(static_cast<Eigen::Index>(keep.size()));
    if (intercept) d.names.push_back(intercept_name);
    for (const auto& t : terms) d.names.push_back(t);
    for (std::size_t r = 0; r < keep.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        Eigen::Index c = 0;
        if (intercept) d.x(row, c++) = 1.0;
        for (const auto& col : cols) d.x(row, c++) = col[keep[r]];
        d.y(row) = y[keep[r]];
    }
    return d;
}

// --- OLS with HC1 -----------------------------------------------------------

struct RegressionResult {
    std::string response;
    std::vector<std::string> names;
    Eigen::VectorXd coefficients;
    Eigen::VectorXd robust_se;
    Eigen::VectorXd p_values;
    Eigen::MatrixXd covariance; ///< HC1
    Eigen::VectorXd classical_se;
    Eigen::VectorXd residuals;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    std::string covariance_type = "HC1";

    std::size_t index(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw InvalidInput("no coefficient '" + name + "'");
    }
    double coef(const std::string& name) const { return coefficients(static_cast<Eigen::Index>(index(name))); }
    double se(const std::string& name) const { return robust_se(static_cast<Eigen::Index>(index(name))); }
    double p(const std::string& name) const { return p_values(static_cast<Eigen::Index>(index(name))); }
    double t(const std::string& name) const { return coef(name) / se(name); }
};

inline double normal_two_sided_p(double z) {
    if (std::isnan(z)) return 1.0;
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

/// Names of columns that are linear combinations of earlier columns.
inline std::vector<std::string> dependent_columns(const DesignMatrix& d, double threshold = 1e-9) {
    std::vector<std::string> bad;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < d.x.cols(); ++j) {
        Eigen::MatrixXd sub(d.x.rows(), static_cast<Eigen::Index>(kept.size()) + 1);
        for (std::size_t k = 0; k < kept.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = d.x.col(kept[k]);
        sub.col(sub.cols() - 1) = d.x.col(j);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
        qr.setThreshold(threshold);
        if (qr.rank() == sub.cols()) kept.push_back(j);
        else bad.push_back(d.names[static_cast<std::size_t>(j)]);
    }
    return bad;
}

/// Least squares by column-pivoted QR with the HC1 sandwich
///   V = n / (n - k) * (X'X)^-1 X' diag(e^2) X (X'X)^-1
/// and normal-reference p-values.
inline RegressionResult ols_hc1(const DesignMatrix& d) {
    d.validate();
    const Eigen::Index n = d.x.rows(), k = d.x.cols();
    if (k == 0) throw InvalidInput("regression has no regressors");
    if (n <= k)
        throw InvalidInput("regression needs more observations (" + std::to_string(n) + ") than regressors (" +
                           std::to_string(k) + ")");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
    qr.setThreshold(1e-9);
    if (qr.rank() < k) {
        auto bad = dependent_columns(d);
        if (bad.empty()) bad.push_back("(unidentified)");
        throw RankDeficient(bad);
    }
    RegressionResult r;
    r.response = d.response;
    r.names = d.names;
    r.n_obs = static_cast<std::size_t>(n);
    r.coefficients = qr.solve(d.y);
    r.residuals = d.y - d.x * r.coefficients;

    // (X'X)^-1 = P R^-1 R^-T P'
    const Eigen::MatrixXd rtop = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rinv =
        rtop.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd perm_rinv = qr.colsPermutation() * rinv;
    const Eigen::MatrixXd bread = perm_rinv * perm_rinv.transpose();

    const Eigen::MatrixXd xe = d.x.array().colwise() * r.residuals.array();
    const Eigen::MatrixXd meat = xe.transpose() * xe;
    const double scale = static_cast<double>(n) / static_cast<double>(n - k);
    r.covariance = scale * bread * meat * bread;
    r.covariance = 0.5 * (r.covariance + r.covariance.transpose()).eval();
    r.robust_se = r.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    const double s2 = r.residuals.squaredNorm() / static_cast<double>(n - k);
    r.classical_se = (s2 * bread.diagonal()).cwiseMax(0.0).cwiseSqrt();
    r.p_values.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double se = r.robust_se(j);
        r.p_values(j) = se > 0.0 ? normal_two_sided_p(r.coefficients(j) / se) : (r.coefficients(j) == 0.0 ? 1.0 : 0.0);
    }

    const bool has_intercept = std::find(d.names.begin(), d.names.end(), intercept_name) != d.names.end();
    const double ybar = has_intercept ? d.y.mean() : 0.0;
    const double sst = (d.y.array() - ybar).square().sum();
    const double ssr = r.residuals.squaredNorm();
    r.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
    return r;
}

inline RegressionResult regress(const DataFrame& f, const std::string& response, const std::vector<std::string>& terms,
                                bool intercept = true) {
    return ols_hc1(build_design(f, response, terms, intercept));
}

// --- specifications ---------------------------------------------------------

inline const std::vector<std::string>& arm_dummies() {
    static const std::vector<std::string> v{"AR", "RA", "AA"};
    return v;
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/// Socio-demographic controls of the contribution regressions.
inline const std::vector<std::string>& standard_controls() {
    static const std::vector<std::string> v{"age",     "female",         "education",       "altruism",
                                            "envy",    "ideology",       "gravity",         "number_actions",
                                            "social_transfer", "crt", "unemployed"};
    return v;
}

/// Nested contribution specifications, 1..5: arms only; + controls;
/// + risk aversion; + ambiguity aversion; + beliefs.
inline std::vector<std::string> contribution_spec(int column) {
    if (column < 1 || column > 5) throw InvalidInput("contribution specification must be 1..5");
    auto t = arm_dummies();
    if (column >= 2) t = concat(t, standard_controls());
    if (column >= 3) t.push_back("risk_aversion");
    if (column >= 4) t.push_back("ambiguity_aversion");
    if (column >= 5) t.push_back("belief");
    return t;
}

/// Belief regressions, 1..4: the same nesting without beliefs.
inline std::vector<std::string> belief_spec(int column) {
    if (column < 1 || column > 4) throw InvalidInput("belief specification must be 1..4");
    return contribution_spec(column);
}

inline std::vector<std::string> interaction_terms(const std::string& moderator) {
    auto t = concat(arm_dummies(), {"age", "crt", "belief", moderator});
    for (const auto& a : arm_dummies()) t.push_back(a + "*" + moderator);
    return t;
}

/// Arms, moderator and arm x moderator, with age, CRT and beliefs as controls.
inline RegressionResult interaction_model(const DataFrame& f, const std::string& moderator,
                                          const std::string& response = "contribution") {
    if (!f.has_numeric(moderator)) throw InvalidInput("moderator '" + moderator + "' is not a numeric column");
    return regress(f, response, interaction_terms(moderator));
}

inline std::vector<std::string> pivotal_terms() {
    return concat(arm_dummies(), {"age", "female", "education", "altruism", "crt", "pivotal", "perception_accuracy",
                                  "pivotal*perception_accuracy"});
}

/// Strategic uncertainty: pivotal flag, perceived accuracy and their product.
inline RegressionResult pivotal_model(const DataFrame& f, const std::string& response = "contribution") {
    if (!f.has_numeric("pivotal") || !f.has_numeric("perception_accuracy"))
        throw InvalidInput("pivotal model needs pivotal and perception_accuracy columns");
    return regress(f, response, pivotal_terms());
}

// --- treatment effects ------------------------------------------------------

inline std::vector<std::string> arms_present(const DataFrame& f) {
    std::vector<std::string> out;
    for (const auto& a : f.strings("treatment"))
        if (!a.empty() && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
}

struct AteEstimate {
    std::string arm;
    double estimate = 0.0;
    double se = 0.0;
    double p = 1.0;
};

struct AteReport {
    std::string baseline;
    std::vector<AteEstimate> effects;
    RegressionResult regression;

    const AteEstimate& at(const std::string& arm) const {
        for (const auto& e : effects)
            if (e.arm == arm) return e;
        throw InvalidInput("no estimate for arm '" + arm + "'");
    }
};

/// Outcome on arm dummies only; one contrast per non-baseline arm present.
inline AteReport ate_report(const DataFrame& f, const std::string& response = "contribution",
                            const std::string& baseline = "RR") {
    const auto present = arms_present(f);
    if (std::find(present.begin(), present.end(), baseline) == present.end())
        throw InvalidInput("baseline arm " + baseline + " is absent");
    std::vector<std::string> terms;
    for (auto t : all_treatments) {
        const auto label = to_string(t);
        if (label != baseline && std::find(present.begin(), present.end(), label) != present.end()) terms.push_back(label);
    }
    if (terms.empty()) throw InvalidInput("only one arm present: no treatment contrasts");
    AteReport rep;
    rep.baseline = baseline;
    rep.regression = regress(f, response, terms);
    for (const auto& t : terms) rep.effects.push_back({t, rep.regression.coef(t), rep.regression.se(t), rep.regression.p(t)});
    return rep;
}

// --- balance ----------------------------------------------------------------

struct WelchResult {
    double difference = 0.0; ///< mean(b) - mean(a)
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

/// Unequal-variance two-sample t test.
inline WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw InvalidInput("Welch test needs at least two observations per group");
    auto moments = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, s / static_cast<double>(v.size() - 1)};
    };
    const auto [ma, va] = moments(a);
    const auto [mb, vb] = moments(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    WelchResult r;
    r.difference = mb - ma;
    const double se2 = va / na + vb / nb;
    if (se2 == 0.0) {
        r.p = r.difference == 0.0 ? 1.0 : 0.0;
        r.t = r.difference == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.difference);
        r.df = na + nb - 2;
        return r;
    }
    r.t = r.difference / std::sqrt(se2);
    r.df = se2 * se2 / ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
    boost::math::students_t dist(r.df);
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
    return r;
}

/// Covariates compared across arms, in display order.
inline std::vector<std::string> balance_covariates() {
    return {"age",      "female",   "education", "patience", "ambiguity_aversion", "risk_aversion",
            "crt",      "math_ability", "altruism", "envy",     "ideology",           "gravity",
            "number_actions", "unemployed", "social_transfer"};
}

struct BalanceRow {
    std::string covariate;
    double baseline_mean = 0.0;
    std::vector<double> p_values; ///< one per compared arm
};

struct BalanceTable {
    std::string baseline;
    std::vector<std::string> arms; ///< compared arms
    std::vector<BalanceRow> rows;

    double p(const std::string& covariate, const std::string& arm) const {
        const auto a = std::find(arms.begin(), arms.end(), arm);
        if (a == arms.end()) throw InvalidInput("arm " + arm + " not in balance table");
        for (const auto& r : rows)
            if (r.covariate == covariate) return r.p_values[static_cast<std::size_t>(a - arms.begin())];
        throw InvalidInput("covariate " + covariate + " not in balance table");
    }

    std::size_t tests() const { return rows.size() * arms.size(); }

    /// Per-test level after a Bonferroni correction over the whole table.
    double bonferroni_level(double family_level = 0.05) const {
        return tests() == 0 ? family_level : family_level / static_cast<double>(tests());
    }

    /// (covariate, arm) cells below `level` that fail the Bonferroni bound.
    std::vector<std::pair<std::string, std::string>> fragile(double level = 0.05) const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& r : rows)
            for (std::size_t k = 0; k < arms.size(); ++k)
                if (r.p_values[k] < level && r.p_values[k] >= bonferroni_level(level)) out.emplace_back(r.covariate, arms[k]);
        return out;
    }
};

inline std::string stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

/// Baseline means and Welch p-values of each arm against the baseline.
/// Missing values are dropped per covariate.
inline BalanceTable balance_table(const DataFrame& f, const std::vector<std::string>& covariates,
                                  const std::string& baseline = "RR") {
    const auto present = arms_present(f);
    if (present.size() < 2) throw InvalidInput("balance table needs at least two arms");
    if (std::find(present.begin(), present.end(), baseline) == present.end())
        throw InvalidInput("baseline arm " + baseline + " is absent");
    BalanceTable t;
    t.baseline = baseline;
    for (auto tr : all_treatments) {
        const auto label = to_string(tr);
        if (label != baseline && std::find(present.begin(), present.end(), label) != present.end()) t.arms.push_back(label);
    }
    for (const auto& p : present) {
        bool canonical = false;
        for (auto tr : all_treatments) canonical = canonical || to_string(tr) == p;
        if (!canonical && p != baseline) t.arms.push_back(p);
    }
    const auto& arm_col = f.strings("treatment");
    for (const auto& cov : covariates) {
        const auto& v = f.numeric(cov);
        auto values_for = [&](const std::string& arm) {
            std::vector<double> out;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (arm_col[i] == arm && !is_missing(v[i])) out.push_back(v[i]);
            if (out.empty()) throw InvalidInput("arm " + arm + " has no observations of " + cov);
            return out;
        };
        const auto base = values_for(baseline);
        BalanceRow row;
        row.covariate = cov;
        double m = 0;
        for (double x : base) m += x;
        row.baseline_mean = m / static_cast<double>(base.size());
        for (const auto& a : t.arms) row.p_values.push_back(welch_t_test(base, values_for(a)).p);
        t.rows.push_back(std::move(row));
    }
    return t;
}

// --- power ------------------------------------------------------------------

struct PowerReport {
    int arms = 2;
    double n_per_arm = 0.0;
    double outcome_sd = 0.0;
    double alpha_level = 0.05;
    double power_target = 0.8;
    double mde = 0.0;
    std::optional<double> mc_rejection_rate;
    std::size_t mc_replications = 0;
};

inline double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

/// Two-sample minimum detectable effect
///   (z_{1 - alpha/2} + z_{power}) * sd * sqrt(2 / n_per_arm).
inline PowerReport mde(int arms, double n_per_arm, double sd, double alpha_level = 0.05, double power_target = 0.8) {
    if (arms < 2) throw InvalidInput("power analysis needs at least two arms");
    if (!(n_per_arm > 0) || !(sd > 0)) throw InvalidInput("n per arm and sd must be positive");
    if (!(alpha_level > 0 && alpha_level < 1)) throw InvalidInput("alpha level must lie in (0,1)");
    if (!(power_target > 0 && power_target < 1)) throw InvalidInput("power target must lie in (0,1)");
    PowerReport r;
    r.arms = arms;
    r.n_per_arm = n_per_arm;
    r.outcome_sd = sd;
    r.alpha_level = alpha_level;
    r.power_target = power_target;
    r.mde = (normal_quantile(1 - alpha_level / 2) + normal_quantile(power_target)) * sd * std::sqrt(2.0 / n_per_arm);
    return r;
}

/// Share of simulated two-arm trials (normal outcomes, true difference
/// `effect`) whose difference in means is significant at `alpha_level`
/// with unequal-variance standard errors and a normal reference.
inline double mc_rejection_rate(std::size_t n_per_arm, double sd, double effect, double alpha_level,
                                std::size_t replications, std::uint64_t seed, unsigned workers = 1) {
    if (n_per_arm < 2 || replications == 0) throw InvalidInput("Monte Carlo needs n >= 2 per arm and replications");
    const double crit = normal_quantile(1 - alpha_level / 2);
    std::vector<char> reject(replications, 0);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            Rng rng(seed, StreamPurpose::monte_carlo, r);
            double s[2] = {0, 0}, s2[2] = {0, 0};
            for (int arm = 0; arm < 2; ++arm)
                for (std::size_t i = 0; i < n_per_arm; ++i) {
                    const double x = rng.normal(arm ? effect : 0.0, sd);
                    s[arm] += x;
                    s2[arm] += x * x;
                }
            const double n = static_cast<double>(n_per_arm);
            const double m0 = s[0] / n, m1 = s[1] / n;
            const double v0 = (s2[0] - n * m0 * m0) / (n - 1), v1 = (s2[1] - n * m1 * m1) / (n - 1);
            reject[r] = std::abs(m1 - m0) / std::sqrt(v0 / n + v1 / n) > crit;
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1) {
        work(0, replications);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, replications * w / workers, replications * (w + 1) / workers);
        for (auto& t : pool) t.join();
    }
    return static_cast<double>(std::count(reject.begin(), reject.end(), 1)) / static_cast<double>(replications);
}

/// Adds the Monte Carlo rejection rate at the reported MDE.
inline PowerReport verify_mde(PowerReport r, std::size_t replications, std::uint64_t seed, unsigned workers = 1) {
    r.mc_rejection_rate = mc_rejection_rate(static_cast<std::size_t>(std::llround(r.n_per_arm)), r.outcome_sd, r.mde,
                                            r.alpha_level, replications, seed, workers);
    r.mc_replications = replications;
    return r;
}

// --- polarization -----------------------------------------------------------

struct PolarizationReport {
    std::string arm_a, arm_b;
    std::size_t n_a = 0, n_b = 0;
    double var_a = 0.0, var_b = 0.0;
    double variance_ratio = 1.0; ///< var_b / var_a
    double zero_share_a = 0.0, zero_share_b = 0.0;
    double top_share_a = 0.0, top_share_b = 0.0; ///< at or above the top amount
    double p_value = 1.0;                        ///< permutation, two-sided on |log ratio|
    std::size_t permutations = 0;
};

namespace detail {
inline double sample_var(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}
inline double log_ratio_stat(double va, double vb) {
    if (va == 0.0 && vb == 0.0) return 0.0;
    if (va == 0.0 || vb == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(std::log(vb / va));
}
} // namespace detail

/// Dispersion of `column` in arm b relative to arm a, with a permutation
/// p-value for the variance ratio.
inline PolarizationReport polarization(const DataFrame& f, const std::string& arm_a, const std::string& arm_b,
                                       double top = 5.0, std::size_t permutations = 2000, std::uint64_t seed = 1,
                                       const std::string& column = "contribution") {
    const auto& v = f.numeric(column);
    const auto& arms = f.strings("treatment");
    std::vector<double> a, b;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (is_missing(v[i])) continue;
        if (arms[i] == arm_a) a.push_back(v[i]);
        else if (arms[i] == arm_b) b.push_back(v[i]);
    }
    if (a.size() < 2 || b.size() < 2) throw InvalidInput("polarization needs both arms with at least two observations");
    PolarizationReport r;
    r.arm_a = arm_a;
    r.arm_b = arm_b;
    r.n_a = a.size();
    r.n_b = b.size();
    r.var_a = detail::sample_var(a);
    r.var_b = detail::sample_var(b);
    r.variance_ratio = r.var_a > 0 ? r.var_b / r.var_a : std::numeric_limits<double>::infinity();
    auto share = [](const std::vector<double>& x, auto pred) {
        return static_cast<double>(std::count_if(x.begin(), x.end(), pred)) / static_cast<double>(x.size());
    };
    r.zero_share_a = share(a, [](double x) { return x == 0.0; });
    r.zero_share_b = share(b, [](double x) { return x == 0.0; });
    r.top_share_a = share(a, [&](double x) { return x >= top; });
    r.top_share_b = share(b, [&](double x) { return x >= top; });

    const double observed = detail::log_ratio_stat(r.var_a, r.var_b);
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::size_t extreme = 0;
    for (std::size_t k = 0; k < permutations; ++k) {
        Rng rng(seed, StreamPurpose::permutation, k);
        auto p = pooled;
        for (std::size_t i = p.size(); i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
        const std::vector<double> pa(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(a.size()));
        const std::vector<double> pb(p.begin() + static_cast<std::ptrdiff_t>(a.size()), p.end());
        if (detail::log_ratio_stat(detail::sample_var(pa), detail::sample_var(pb)) >= observed - 1e-12) ++extreme;
    }
    r.permutations = permutations;
    r.p_value = static_cast<double>(extreme + 1) / static_cast<double>(permutations + 1);
    return r;
}

/// Counts per (arm, value) for plot-ready histograms of a grid outcome.
inline std::string histogram_csv(const DataFrame& f, Money step = Money::euros(1), Money top = Money::euros(5),
                                 const std::string& column = "contribution") {
    const auto& v = f.numeric(column);
    const auto& arms = f.strings("treatment");
    std::string out = "treatment,value,count,share\n";
    for (auto t : table_order) {
        const auto label = to_string(t);
        std::vector<std::size_t> counts(static_cast<std::size_t>(top.cents() / step.cents()) + 1, 0);
        std::size_t n = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (arms[i] != label || is_missing(v[i])) continue;
            const auto k = static_cast<long long>(std::llround(v[i] * 100.0)) / step.cents();
            if (k >= 0 && static_cast<std::size_t>(k) < counts.size()) ++counts[static_cast<std::size_t>(k)];
            ++n;
        }
        if (n == 0) continue;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            char buf[96];
            std::snprintf(buf, sizeof buf, ",%zu,%.6f\n", counts[k], static_cast<double>(counts[k]) / static_cast<double>(n));
            out += label + "," + (step * static_cast<std::int64_t>(k)).to_string() + buf;
        }
    }
    return out;
}

} // namespace pgg
