#pragma once

#include <stdexcept>
#include <string>

namespace weightlab {

/// Base of every error thrown by the library. The CLI maps these to exit
/// status 2 (bad input) unless they are check failures.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad grid/run configuration (resolution out of range, no admissible interval).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (p < 1, negative input).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Interval or index outside the grid.
class BoundsError : public Error {
public:
    using Error::Error;
};

/// A weight sample that is not strictly positive and finite.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}
    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Rubio de Francia series truncated too early.
class DepthError : public Error {
public:
    using Error::Error;
};

/// Violated precondition of a verification (majorant does not dominate, etc.).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed lattice expression.
class FormError : public Error {
public:
    using Error::Error;
};

/// Missing convexity/concavity declaration on a generator.
class DeclarationError : public Error {
public:
    using Error::Error;
};

/// Inference rule applied to premises that do not match, or a failed side condition.
class RuleError : public Error {
public:
    using Error::Error;
};

/// Weight DSL or CLI argument that cannot be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace weightlab
