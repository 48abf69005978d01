#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "pgg/errors.hpp"

namespace pgg {

/// Exact amount in cents. All contribution, threshold and endowment
/// arithmetic goes through this type so step-function comparisons never see
/// a floating-point total.
class Money {
public:
    constexpr Money() = default;

    static constexpr Money cents(std::int64_t c) noexcept { return Money(c); }
    static constexpr Money euros(std::int64_t e) noexcept { return Money(e * 100); }

    /// Parses "5", "9.99", "0.5". More than two decimals are accepted only
    /// when the extra digits are zeros.
    static Money parse(std::string_view s) {
        const std::string err = "malformed money amount '" + std::string(s) + "'";
        if (s.empty()) throw InvalidInput(err);
        bool neg = s.front() == '-';
        if (neg || s.front() == '+') s.remove_prefix(1);
        auto dot = s.find('.');
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw InvalidInput(err);
        std::int64_t whole = 0;
        if (!ip.empty()) {
            auto [p, ec] = std::from_chars(ip.data(), ip.data() + ip.size(), whole);
            if (ec != std::errc{} || p != ip.data() + ip.size()) throw InvalidInput(err);
        }
        std::int64_t frac = 0;
        for (std::size_t i = 0; i < fp.size(); ++i) {
            char c = fp[i];
            if (c < '0' || c > '9') throw InvalidInput(err);
            if (i < 2) {
                frac = frac * 10 + (c - '0');
            } else if (c != '0') {
                throw InvalidInput("money amount '" + std::string(s) + "' is finer than one cent");
            }
        }
        if (fp.size() == 1) frac *= 10;
        std::int64_t total = whole * 100 + frac;
        return Money(neg ? -total : total);
    }

    constexpr std::int64_t cents() const noexcept { return cents_; }
    constexpr double to_euros() const noexcept { return static_cast<double>(cents_) / 100.0; }

    /// Shortest lossless decimal: "5", "9.99", "2.5".
    std::string to_string() const {
        std::int64_t a = cents_ < 0 ? -cents_ : cents_;
        std::string s = (cents_ < 0 ? "-" : "") + std::to_string(a / 100);
        std::int64_t f = a % 100;
        if (f == 0) return s;
        if (f % 10 == 0) return s + "." + std::to_string(f / 10);
        return s + (f < 10 ? ".0" : ".") + std::to_string(f);
    }

    friend constexpr Money operator+(Money a, Money b) noexcept { return Money(a.cents_ + b.cents_); }
    friend constexpr Money operator-(Money a, Money b) noexcept { return Money(a.cents_ - b.cents_); }
    friend constexpr Money operator*(Money a, std::int64_t k) noexcept { return Money(a.cents_ * k); }
    friend constexpr Money operator*(std::int64_t k, Money a) noexcept { return Money(a.cents_ * k); }
    constexpr Money& operator+=(Money o) noexcept { cents_ += o.cents_; return *this; }
    constexpr Money& operator-=(Money o) noexcept { cents_ -= o.cents_; return *this; }

    friend constexpr bool operator==(Money, Money) noexcept = default;
    friend constexpr auto operator<=>(Money, Money) noexcept = default;

    friend std::ostream& operator<<(std::ostream& os, Money m) { return os << m.to_string(); }

private:
    constexpr explicit Money(std::int64_t c) noexcept : cents_(c) {}
    std::int64_t cents_ = 0;
};

} // namespace pgg
