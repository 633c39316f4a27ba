/// @file numeric.hpp
/// @brief Compensated summation, tolerance helpers and the error types shared by the library
///
/// Fitness probabilities can span sixty orders of magnitude, so every sum in the library
/// goes through a Neumaier accumulator and every inequality uses an explicit slack.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsf {

/// Integer fitness level. The optimum is level 0 and larger values are worse.
using Cost = int;

/// Tolerance for "sums to one" checks on distributions and kernel rows
inline constexpr double kNormTolerance = 1e-9;

/// Relative slack used when comparing two probabilities in a predicate
inline constexpr double kInequalitySlack = 1e-12;

/// Neumaier compensated accumulator
class CompensatedSum {
    double sum_ = 0.0;
    double carry_ = 0.0;

  public:
    CompensatedSum& add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    CompensatedSum& operator+=(double x) { return add(x); }

    double value() const { return sum_ + carry_; }
};

/// Compensated sum of any range of doubles
template <typename Range>
double compensated_sum(const Range& values) {
    CompensatedSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

/// a >= b allowing a relative slack scaled by the larger magnitude
inline bool approx_geq(double a, double b, double rel = kInequalitySlack) {
    return a >= b - rel * std::max(std::abs(a), std::abs(b));
}

/// a <= b allowing a relative slack scaled by the larger magnitude
inline bool approx_leq(double a, double b, double rel = kInequalitySlack) {
    return approx_geq(b, a, rel);
}

/// |a - b| within an absolute tolerance
inline bool approx_eq(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Bad parameters, malformed input or an unknown name
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A weight vector that cannot be turned into a valid neighbourhood kernel
class InfeasibleWeights : public std::domain_error {
    std::string reason_;

  public:
    InfeasibleWeights(std::string reason, const std::string& detail)
        : std::domain_error(reason + ": " + detail), reason_(std::move(reason)) {}

    /// Short machine-readable cause such as "total_too_low"
    const std::string& reason() const { return reason_; }
};

/// Local descent cannot improve from some level, so the expected steps are unbounded
class UnreachableOptimum : public std::domain_error {
    Cost level_;

  public:
    UnreachableOptimum(Cost level, const std::string& what)
        : std::domain_error(what), level_(level) {}

    Cost level() const { return level_; }
};

/// A computation refused because it would exceed a size or sampling limit
class ResourceLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace nsf
