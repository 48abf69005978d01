#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "pgg/econometrics.hpp"

namespace pgg {

inline std::string fixed(double x, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

namespace detail {
inline std::string pad_right(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}
inline std::string pad_left(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}
inline std::string trim_right(std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}
} // namespace detail

/// Side-by-side regressions: estimate with significance stars, robust
/// standard error in parentheses underneath, then N and R-squared.
inline std::string render_regression_text(const std::vector<RegressionResult>& cols,
                                          std::vector<std::string> labels = {}) {
    if (labels.empty())
        for (std::size_t i = 0; i < cols.size(); ++i) labels.push_back("(" + std::to_string(i + 1) + ")");
    std::vector<std::string> vars;
    for (const auto& c : cols)
        for (const auto& n : c.names)
            if (n != intercept_name && std::find(vars.begin(), vars.end(), n) == vars.end()) vars.push_back(n);
    vars.push_back(intercept_name);

    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head{""};
    for (const auto& l : labels) head.push_back(l);
    grid.push_back(head);
    std::vector<std::string> resp{""};
    for (const auto& c : cols) resp.push_back(c.response);
    grid.push_back(resp);
    for (const auto& v : vars) {
        std::vector<std::string> est{v == intercept_name ? "Constant" : v}, se{""};
        for (const auto& c : cols) {
            const auto it = std::find(c.names.begin(), c.names.end(), v);
            if (it == c.names.end()) {
                est.emplace_back();
                se.emplace_back();
                continue;
            }
            const auto j = static_cast<Eigen::Index>(it - c.names.begin());
            est.push_back(fixed(c.coefficients(j)) + stars(c.p_values(j)));
            se.push_back("(" + fixed(c.robust_se(j)) + ")");
        }
        grid.push_back(est);
        grid.push_back(se);
    }
    std::vector<std::string> nobs{"Observations"}, r2{"R-squared"};
    for (const auto& c : cols) {
        nobs.push_back(std::to_string(c.n_obs));
        r2.push_back(fixed(c.r_squared));
    }
    grid.push_back(nobs);
    grid.push_back(r2);

    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : grid)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    std::string out;
    for (const auto& row : grid) {
        std::string line = detail::pad_right(row[0], width[0]);
        for (std::size_t k = 1; k < row.size(); ++k) line += "  " + detail::pad_left(row[k], width[k]);
        out += detail::trim_right(line) + '\n';
    }
    out += "Robust (HC1) standard errors in parentheses. *** p<0.01, ** p<0.05, * p<0.1\n";
    return out;
}

inline std::string render_regression_csv(const std::vector<RegressionResult>& cols,
                                         std::vector<std::string> labels = {}) {
    if (labels.empty())
        for (std::size_t i = 0; i < cols.size(); ++i) labels.push_back(std::to_string(i + 1));
    std::string out = "model,response,term,estimate,robust_se,p_value,n_obs,r_squared,covariance\n";
    char buf[160];
    for (std::size_t m = 0; m < cols.size(); ++m) {
        const auto& c = cols[m];
        for (std::size_t j = 0; j < c.names.size(); ++j) {
            const auto i = static_cast<Eigen::Index>(j);
            std::snprintf(buf, sizeof buf, ",%.10g,%.10g,%.10g,%zu,%.10g,", c.coefficients(i), c.robust_se(i),
                          c.p_values(i), c.n_obs, c.r_squared);
            out += labels[m] + "," + c.response + ",\"" + c.names[j] + "\"" + buf + c.covariance_type + "\n";
        }
    }
    return out;
}

inline std::string render_balance_text(const BalanceTable& t) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head{"", "Mean_" + t.baseline};
    for (const auto& a : t.arms) head.push_back("p(" + a + "-" + t.baseline + ")");
    grid.push_back(head);
    for (const auto& r : t.rows) {
        std::vector<std::string> row{r.covariate, fixed(r.baseline_mean)};
        for (double p : r.p_values) row.push_back(fixed(p) + stars(p));
        grid.push_back(row);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : grid)
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    std::string out;
    for (const auto& row : grid) {
        std::string line = detail::pad_right(row[0], width[0]);
        for (std::size_t k = 1; k < row.size(); ++k) line += "  " + detail::pad_right(row[k], width[k]);
        out += detail::trim_right(line) + '\n';
    }
    out += "Welch two-sample t tests against " + t.baseline + ". *** p<0.01, ** p<0.05, * p<0.1\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "Bonferroni: %zu tests, per-test level %.5f for 0.05 overall", t.tests(),
                  t.bonferroni_level());
    out += buf;
    const auto fragile = t.fragile();
    if (fragile.empty()) return out + "\n";
    out += "; p<0.05 but not surviving:";
    for (const auto& [cov, arm] : fragile) out += " " + cov + "(" + arm + ")";
    return out + "\n";
}

inline std::string render_balance_csv(const BalanceTable& t) {
    std::string out = "covariate,mean_" + t.baseline;
    for (const auto& a : t.arms) out += ",p_" + a;
    out += '\n';
    char buf[48];
    for (const auto& r : t.rows) {
        std::snprintf(buf, sizeof buf, "%.10g", r.baseline_mean);
        out += r.covariate + "," + buf;
        for (double p : r.p_values) {
            std::snprintf(buf, sizeof buf, ",%.10g", p);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

inline std::string render_polarization_text(const PolarizationReport& r) {
    std::string out;
    out += "arm " + r.arm_a + ": n=" + std::to_string(r.n_a) + " variance=" + fixed(r.var_a) +
           " share at 0=" + fixed(r.zero_share_a) + " share at top=" + fixed(r.top_share_a) + "\n";
    out += "arm " + r.arm_b + ": n=" + std::to_string(r.n_b) + " variance=" + fixed(r.var_b) +
           " share at 0=" + fixed(r.zero_share_b) + " share at top=" + fixed(r.top_share_b) + "\n";
    out += "variance ratio " + r.arm_b + "/" + r.arm_a + " = " + fixed(r.variance_ratio) +
           ", permutation p = " + fixed(r.p_value, 4) + " (" + std::to_string(r.permutations) + " permutations)\n";
    return out;
}

inline std::string render_power_text(const PowerReport& r) {
    std::string out;
    out += "arms: " + std::to_string(r.arms) + "\n";
    out += "n per arm: " + fixed(r.n_per_arm, 1) + "\n";
    out += "outcome sd: " + fixed(r.outcome_sd) + "\n";
    out += "alpha: " + fixed(r.alpha_level) + ", power: " + fixed(r.power_target) + "\n";
    out += "MDE: " + fixed(r.mde, 4) + "\n";
    if (r.mc_rejection_rate)
        out += "Monte Carlo rejection rate at MDE: " + fixed(*r.mc_rejection_rate, 4) + " (" +
               std::to_string(r.mc_replications) + " replications)\n";
    return out;
}

} // namespace pgg
