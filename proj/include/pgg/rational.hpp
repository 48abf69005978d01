#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "pgg/errors.hpp"

namespace pgg {

/// Exact rational number with 64-bit numerator and positive denominator,
/// always stored in lowest terms. Overflow raises NumericalError instead of
/// wrapping.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit from integers is intended
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// Parses "3", "-0.85", "1/3" or "2/10".
    static Rational parse(std::string_view s) {
        if (s.empty()) throw InvalidInput("empty rational literal");
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            return Rational(parse_int(s.substr(0, slash), s), parse_int(s.substr(slash + 1), s));
        }
        bool neg = false;
        std::string_view body = s;
        if (body.front() == '-' || body.front() == '+') {
            neg = body.front() == '-';
            body.remove_prefix(1);
        }
        auto dot = body.find('.');
        std::string_view ip = body.substr(0, dot);
        std::string_view fp = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw InvalidInput("malformed rational literal '" + std::string(s) + "'");
        if (fp.size() > 17) throw InvalidInput("too many decimals in '" + std::string(s) + "'");
        std::int64_t whole = ip.empty() ? 0 : parse_int(ip, s);
        std::int64_t frac = fp.empty() ? 0 : parse_int(fp, s);
        if (whole < 0 || frac < 0) throw InvalidInput("malformed rational literal '" + std::string(s) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        Rational r = Rational(whole) + Rational(frac, scale);
        return neg ? -r : r;
    }

    /// Decimal rendering when the expansion terminates (denominator 2^a 5^b),
    /// "p/q" otherwise. Round-trips through parse().
    std::string to_string() const {
        std::int64_t d = den_;
        int twos = 0, fives = 0;
        while (d % 2 == 0) { d /= 2; ++twos; }
        while (d % 5 == 0) { d /= 5; ++fives; }
        if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
        int digits = twos > fives ? twos : fives;
        if (digits == 0) return std::to_string(num_);
        __int128 scaled = static_cast<__int128>(num_);
        for (int i = 0; i < digits; ++i) scaled *= 10;
        scaled /= den_;
        bool neg = scaled < 0;
        if (neg) scaled = -scaled;
        __int128 pow = 1;
        for (int i = 0; i < digits; ++i) pow *= 10;
        auto whole = static_cast<std::int64_t>(scaled / pow);
        auto frac = static_cast<std::int64_t>(scaled % pow);
        std::string fs = std::to_string(frac);
        fs.insert(0, static_cast<std::size_t>(digits) - fs.size(), '0');
        while (!fs.empty() && fs.back() == '0') fs.pop_back();
        return (neg ? "-" : "") + std::to_string(whole) + (fs.empty() ? "" : "." + fs);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw NumericalError("rational division by zero");
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw NumericalError("rational with zero denominator");
        *this = from_wide(n, d);
    }

    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw NumericalError("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw NumericalError("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static std::int64_t parse_int(std::string_view part, std::string_view whole) {
        std::int64_t v = 0;
        const char* first = part.data();
        if (!part.empty() && part.front() == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || first == part.data() + part.size())
            throw InvalidInput("malformed rational literal '" + std::string(whole) + "'");
        return v;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace pgg
