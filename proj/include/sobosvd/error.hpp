#pragma once

#include <stdexcept>
#include <string>

namespace sobosvd {

/// Precondition violated by the caller (bad size, incompatible weight, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative kernel failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Non-finite values where finite ones are required.
class NonFiniteError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace sobosvd
