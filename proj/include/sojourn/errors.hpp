#ifndef SOJOURN_ERRORS_HPP
#define SOJOURN_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace sojourn {

// Exit-code classes used by the CLI: config errors map to 2, runtime errors
// (budget, escape, overflow) to 3.
enum class ErrorCode {
    invalid_argument,
    numeric_overflow,
    orbit_exhausted,
    dimension_mismatch,
    not_lagrange_stable,
    unsupported_operation,
    budget_exceeded,
    degenerate_estimate,
    config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class NumericOverflowError : public Error {
public:
    explicit NumericOverflowError(const std::string& what, std::optional<std::size_t> index = {})
        : Error(ErrorCode::numeric_overflow, what), index_(index) {}
    std::optional<std::size_t> index() const { return index_; }

private:
    std::optional<std::size_t> index_;
};

class OrbitExhaustedError : public Error {
public:
    explicit OrbitExhaustedError(const std::string& what, std::optional<std::size_t> index = {})
        : Error(ErrorCode::orbit_exhausted, what), index_(index) {}
    std::optional<std::size_t> index() const { return index_; }

private:
    std::optional<std::size_t> index_;
};

class DimensionMismatchError : public Error {
public:
    explicit DimensionMismatchError(const std::string& what) : Error(ErrorCode::dimension_mismatch, what) {}
};

class NotLagrangeStableError : public Error {
public:
    NotLagrangeStableError(const std::string& what, std::size_t first_escape)
        : Error(ErrorCode::not_lagrange_stable, what), first_escape_(first_escape) {}
    std::size_t first_escape() const { return first_escape_; }

private:
    std::size_t first_escape_;
};

class UnsupportedOperationError : public Error {
public:
    explicit UnsupportedOperationError(const std::string& what) : Error(ErrorCode::unsupported_operation, what) {}
};

class BudgetExceededError : public Error {
public:
    explicit BudgetExceededError(const std::string& what) : Error(ErrorCode::budget_exceeded, what) {}
};

class DegenerateEstimateError : public Error {
public:
    explicit DegenerateEstimateError(const std::string& what) : Error(ErrorCode::degenerate_estimate, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0) : Error(ErrorCode::config, what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace sojourn

#endif
