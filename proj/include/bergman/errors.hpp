#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Bad arguments: negative orders, out-of-range indices, unsupported variants.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point handed to an exterior-only routine does not lie in the exterior domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative procedure (Newton, quadrature refinement) ran out of budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Working precision no longer resolves the computation (vanishing
/// normalisation constant in Arnoldi, non-positive diagonal, ...).
class PrecisionExhausted : public std::runtime_error {
public:
    PrecisionExhausted(const std::string& what, int step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

/// Container file unreadable or checksum mismatch.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bergman
