#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace magnomech {

// Parameter set violates one or more invariants. what() joins every failure.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> failures);

    const std::vector<std::string>& failures() const noexcept { return failures_; }

private:
    std::vector<std::string> failures_;
};

// Malformed or self-contradicting configuration document.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the domain of a formula (non-positive mass, non-finite coefficient, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical procedure failed to produce a result it is contractually obliged to produce.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace magnomech
