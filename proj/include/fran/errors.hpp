#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fran {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Quadrature or series that did not reach its tolerance. Carries the best
/// estimate available when the budget ran out.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_value, double error_estimate)
        : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_value_;
    double error_estimate_;
};

/// A transmitter coincides with the receiver, so received power is unbounded.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {}, std::size_t line = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    /// 1-based source line, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fran
