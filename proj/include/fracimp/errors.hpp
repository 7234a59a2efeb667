#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracimp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result would overflow or the argument exceeds a documented evaluation bound.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Grid too coarse for the requested discrete operator.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two sampled functions do not share a grid layout.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A user-supplied map produced a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stability denominator is not positive for the chosen Bielecki weight.
class ThetaTooSmallError : public std::runtime_error {
public:
    ThetaTooSmallError(const std::string& what, std::string interval, double denominator)
        : std::runtime_error(what), interval_(std::move(interval)), denominator_(denominator) {}

    const std::string& interval() const noexcept { return interval_; }
    double denominator() const noexcept { return denominator_; }

private:
    std::string interval_;
    double denominator_;
};

/// Bisection could not bring a contraction constant below one.
class NoThresholdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fracimp
