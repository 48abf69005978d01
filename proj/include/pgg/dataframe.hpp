#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pgg/errors.hpp"
#include "pgg/simulator.hpp"

namespace pgg {

/// Column table: numeric columns (NaN marks a missing value) and string
/// columns, all of the same length.
class DataFrame {
public:
    std::size_t rows() const { return rows_; }
    const std::vector<std::string>& names() const { return order_; }

    bool has_numeric(const std::string& name) const { return numeric_.count(name) != 0; }
    bool has_string(const std::string& name) const { return strings_.count(name) != 0; }

    const std::vector<double>& numeric(const std::string& name) const {
        auto it = numeric_.find(name);
        if (it == numeric_.end()) throw InvalidInput("no numeric column '" + name + "'");
        return it->second;
    }
    const std::vector<std::string>& strings(const std::string& name) const {
        auto it = strings_.find(name);
        if (it == strings_.end()) throw InvalidInput("no text column '" + name + "'");
        return it->second;
    }

    void add_numeric(const std::string& name, std::vector<double> values) {
        check_new(name, values.size());
        numeric_[name] = std::move(values);
        order_.push_back(name);
    }
    void add_strings(const std::string& name, std::vector<std::string> values) {
        check_new(name, values.size());
        strings_[name] = std::move(values);
        order_.push_back(name);
    }
    void set_numeric(const std::string& name, std::vector<double> values) {
        if (!has_numeric(name)) return add_numeric(name, std::move(values));
        if (values.size() != rows_) throw InvalidInput("column '" + name + "' has the wrong length");
        numeric_[name] = std::move(values);
    }

    /// Rows where keep[i] is true, columns unchanged.
    DataFrame filter(const std::vector<bool>& keep) const {
        if (keep.size() != rows_) throw InvalidInput("row mask has the wrong length");
        DataFrame out;
        for (const auto& name : order_) {
            if (has_numeric(name)) {
                std::vector<double> v;
                const auto& src = numeric_.at(name);
                for (std::size_t i = 0; i < rows_; ++i)
                    if (keep[i]) v.push_back(src[i]);
                out.add_numeric(name, std::move(v));
            } else {
                std::vector<std::string> v;
                const auto& src = strings_.at(name);
                for (std::size_t i = 0; i < rows_; ++i)
                    if (keep[i]) v.push_back(src[i]);
                out.add_strings(name, std::move(v));
            }
        }
        if (order_.empty()) out.rows_ = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
        return out;
    }

private:
    void check_new(const std::string& name, std::size_t n) {
        if (has_numeric(name) || has_string(name)) throw InvalidInput("duplicate column '" + name + "'");
        if (!order_.empty() && n != rows_)
            throw InvalidInput("column '" + name + "' has " + std::to_string(n) + " rows, frame has " +
                               std::to_string(rows_));
        rows_ = n;
    }

    std::size_t rows_ = 0;
    std::vector<std::string> order_;
    std::map<std::string, std::vector<double>> numeric_;
    std::map<std::string, std::vector<std::string>> strings_;
};

inline constexpr double missing_value = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Frame with the simulator CSV columns; money columns in euros.
inline DataFrame frame_from_records(const std::vector<SubjectRecord>& records) {
    DataFrame f;
    auto col = [&](auto get) {
        std::vector<double> v;
        v.reserve(records.size());
        for (const auto& r : records) v.push_back(get(r));
        return v;
    };
    f.add_numeric("subject_id", col([](const SubjectRecord& r) { return static_cast<double>(r.subject_id); }));
    std::vector<std::string> arms;
    for (const auto& r : records) arms.push_back(to_string(r.treatment));
    f.add_strings("treatment", std::move(arms));
    f.add_numeric("group_id", col([](const SubjectRecord& r) { return static_cast<double>(r.group_id); }));
    for (const auto& cf : covariate_fields)
        f.add_numeric(std::string(cf.name), col([&](const SubjectRecord& r) { return r.covariates.*cf.member; }));
    f.add_numeric("belief", col([](const SubjectRecord& r) { return r.belief; }));
    f.add_numeric("perception_accuracy", col([](const SubjectRecord& r) { return r.perception_accuracy; }));
    f.add_numeric("pivotal", col([](const SubjectRecord& r) { return r.pivotal ? 1.0 : 0.0; }));
    f.add_numeric("contribution", col([](const SubjectRecord& r) { return r.contribution.to_euros(); }));
    f.add_numeric("group_total", col([](const SubjectRecord& r) { return r.group_total.to_euros(); }));
    f.add_numeric("threshold_drawn", col([](const SubjectRecord& r) { return r.threshold_drawn.to_euros(); }));
    f.add_numeric("success", col([](const SubjectRecord& r) { return r.success ? 1.0 : 0.0; }));
    f.add_numeric("earnings", col([](const SubjectRecord& r) { return r.earnings.to_euros(); }));
    return f;
}

/// Generic CSV reader. Lines starting with '#' are skipped, the first other
/// line is the header, `rename` maps source names to analysis names. A
/// column is numeric when every non-empty cell parses as a number; empty
/// cells and NA become missing.
inline DataFrame read_csv_frame(std::istream& is, const std::map<std::string, std::string>& rename = {}) {
    std::string line;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> cells;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv_line(line);
        if (header.empty()) {
            header = std::move(f);
            for (auto& h : header) {
                auto it = rename.find(h);
                if (it != rename.end()) h = it->second;
            }
            cells.resize(header.size());
            continue;
        }
        if (f.size() != header.size())
            throw InvalidInput("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(f.size()));
        for (std::size_t k = 0; k < f.size(); ++k) cells[k].push_back(std::move(f[k]));
    }
    if (header.empty()) throw InvalidInput("CSV has no header row");

    DataFrame frame;
    for (std::size_t k = 0; k < header.size(); ++k) {
        std::vector<double> nums;
        bool numeric = header[k] != "treatment";
        for (const auto& c : cells[k]) {
            if (!numeric) break;
            if (c.empty() || c == "NA") {
                nums.push_back(missing_value);
                continue;
            }
            std::size_t pos = 0;
            try {
                nums.push_back(std::stod(c, &pos));
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos == 0 || pos != c.size()) numeric = false;
        }
        if (numeric) frame.add_numeric(header[k], std::move(nums));
        else frame.add_strings(header[k], std::move(cells[k]));
    }
    return frame;
}

} // namespace pgg
