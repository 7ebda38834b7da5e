#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chankit {

// Argument outside the mathematical domain of an operation (non-positive
// distance, elevation beyond +-90 deg, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A value object violates one of its invariants.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input. `line` is 1-based; 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Not enough samples (or not enough distinct distances) to fit a model.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Received-power computation requested on an empty profile.
class NoSignalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Infeasible scenario specification for the generator.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace chankit
