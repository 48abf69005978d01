#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pgg {

/// Bad user input: unknown labels, out-of-domain values, malformed config.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not be carried out (overflow, singular system, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration refused because the profile space is too large.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::uint64_t required, std::uint64_t cap)
        : std::runtime_error("profile count " + std::to_string(required) +
                             " exceeds cap " + std::to_string(cap) +
                             "; rerun with cap >= " + std::to_string(required)),
          required_(required), cap_(cap) {}

    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t required_;
    std::uint64_t cap_;
};

/// Design matrix without full column rank.
class RankDeficient : public NumericalError {
public:
    explicit RankDeficient(std::vector<std::string> columns)
        : NumericalError(message(columns)), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    static std::string message(const std::vector<std::string>& cols) {
        std::string m = "design matrix is rank deficient; collinear columns:";
        for (const auto& c : cols) m += " " + c;
        return m;
    }
    std::vector<std::string> columns_;
};

} // namespace pgg
