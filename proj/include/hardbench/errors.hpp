#pragma once

#include <stdexcept>
#include <string>

namespace hardbench {

/// A caller broke a documented precondition (wrong dimension, out-of-bounds
/// point, parameter outside its domain).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Bad user input at the CLI / config layer: unknown ids, formats, flags.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method ran out of budget before meeting its tolerance. Carries
/// the best value it had and the error estimate for that value.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_value, double est_error)
        : std::runtime_error(what), best_value_(best_value), est_error_(est_error) {}

    double best_value() const noexcept { return best_value_; }
    double est_error() const noexcept { return est_error_; }

private:
    double best_value_;
    double est_error_;
};

}  // namespace hardbench
