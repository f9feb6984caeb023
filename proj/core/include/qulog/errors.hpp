#pragma once

#include <stdexcept>
#include <string>

namespace qulog {

// Thrown when a certified answer cannot be produced at the working
// precision. Callers are expected to escalate precision and retry.
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// An argument is outside an operation's mathematical domain
// (wrong residue class of q, log of a non-unit, exp below the
// convergence bound, and so on).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A value that the underlying theory predicts cannot occur was observed.
// Surfaced instead of a crash so the caller can report it.
class AnomalyFlag : public std::runtime_error {
public:
    explicit AnomalyFlag(const std::string& what) : std::runtime_error(what) {}
};

// Certificate construction produced something that is not a unit, or a
// claimed identity between exact field elements failed. Always a bug or
// corrupt input, never a precision effect.
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(std::string identity, const std::string& what)
        : std::runtime_error(what), identity_(std::move(identity)) {}
    const std::string& identity() const { return identity_; }

private:
    std::string identity_;
};

} // namespace qulog
