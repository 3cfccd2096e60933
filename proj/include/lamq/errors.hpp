#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamq {

/// Caller passed something outside an operation's domain (q not prime, r < 2, limits differ, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// q is prime but not in the residue class the requested routine is defined for.
class ClassificationError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// The request would exceed a configured memory or size budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tolerance that cannot be certified, or a real-valued decision too close to call.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact 64-bit arithmetic left its range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// ‖f(n)‖ fell inside the guard band around δ for the listed n.
class UndecidableError : public PrecisionError {
public:
    UndecidableError(const std::string& what, std::vector<std::uint64_t> points)
        : PrecisionError(what), points_(std::move(points)) {}

    const std::vector<std::uint64_t>& points() const noexcept { return points_; }

private:
    std::vector<std::uint64_t> points_;
};

} // namespace lamq
