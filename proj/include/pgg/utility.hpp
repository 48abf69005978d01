#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgg/errors.hpp"
#include "pgg/money.hpp"

namespace pgg {

/// Strictly increasing utility of money with u(0) = 0.
///
/// Power family u(x) = x^rho (x in euros): rho = 1 risk neutral, rho > 1
/// risk loving, rho < 1 risk averse. Table family: piecewise linear through
/// user points, first point (0, 0).
class UtilityFn {
public:
    struct Power {
        double rho;
    };
    struct Table {
        std::vector<std::pair<Money, double>> points;
    };

    static UtilityFn power(double rho) {
        if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("power utility needs rho > 0");
        return UtilityFn(Power{rho});
    }

    static UtilityFn table(std::vector<std::pair<Money, double>> points) {
        if (points.size() < 2) throw InvalidInput("table utility needs at least two points");
        if (points.front().first != Money{} || points.front().second != 0.0)
            throw InvalidInput("table utility must start at (0, 0)");
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (!(points[i - 1].first < points[i].first))
                throw InvalidInput("table utility amounts must be strictly increasing");
            if (!(points[i - 1].second < points[i].second))
                throw InvalidInput("table utility must be strictly increasing at " + points[i].first.to_string());
        }
        return UtilityFn(Table{std::move(points)});
    }

    static UtilityFn risk_neutral() { return power(1.0); }

    /// Same preferences multiplied by a positive constant.
    UtilityFn scaled(double k) const {
        if (!(k > 0.0)) throw InvalidInput("utility scale must be positive");
        UtilityFn u = *this;
        u.scale_ *= k;
        return u;
    }

    double operator()(Money x) const {
        if (x < Money{}) throw InvalidInput("utility is undefined for negative amounts");
        if (const auto* p = std::get_if<Power>(&family_)) return scale_ * std::pow(x.to_euros(), p->rho);
        const auto& pts = std::get<Table>(family_).points;
        if (x > pts.back().first)
            throw InvalidInput("table utility undefined above " + pts.back().first.to_string());
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (x <= pts[i].first) {
                const auto& [x0, y0] = pts[i - 1];
                const auto& [x1, y1] = pts[i];
                double w = static_cast<double>((x - x0).cents()) / static_cast<double>((x1 - x0).cents());
                return scale_ * (y0 + w * (y1 - y0));
            }
        }
        return scale_ * pts.front().second;
    }

    bool is_power() const { return std::holds_alternative<Power>(family_); }
    double rho() const {
        if (!is_power()) throw InvalidInput("utility is not in the power family");
        return std::get<Power>(family_).rho;
    }
    double scale() const { return scale_; }
    const std::variant<Power, Table>& family() const { return family_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        if (is_power()) {
            j = {{"family", "power"}, {"rho", rho()}};
        } else {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& [x, y] : std::get<Table>(family_).points) pts.push_back({x.to_euros(), y});
            j = {{"family", "table"}, {"points", pts}};
        }
        if (scale_ != 1.0) j["scale"] = scale_;
        return j;
    }

    static UtilityFn from_json(const nlohmann::json& j) {
        try {
            const auto family = j.at("family").get<std::string>();
            UtilityFn u = [&] {
                if (family == "power") return power(j.at("rho").get<double>());
                if (family == "table") {
                    std::vector<std::pair<Money, double>> pts;
                    for (const auto& p : j.at("points")) {
                        if (!p.is_array() || p.size() != 2) throw InvalidInput("table point must be [amount, value]");
                        const auto& a = p[0];
                        Money m = a.is_string() ? Money::parse(a.get<std::string>())
                                                : Money::cents(std::llround(a.get<double>() * 100.0));
                        pts.emplace_back(m, p[1].get<double>());
                    }
                    return table(std::move(pts));
                }
                throw InvalidInput("unknown utility family '" + family + "'");
            }();
            if (j.contains("scale")) u = u.scaled(j.at("scale").get<double>());
            return u;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput(std::string("utility JSON: ") + e.what());
        }
    }

private:
    explicit UtilityFn(std::variant<Power, Table> f) : family_(std::move(f)) {}
    std::variant<Power, Table> family_;
    double scale_ = 1.0;
};

} // namespace pgg
