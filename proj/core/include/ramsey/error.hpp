#pragma once

#include <stdexcept>
#include <string>

namespace ramsey {

/// Argument outside the domain of a function (nonpositive consumption, bad parameter).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Shapes of two objects that must agree do not.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Operation called on the wrong model variant or with an unsupported input combination.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A residual evaluation left the region where the optimality recursions are solvable,
/// e.g. a nonpositive adjoint multiplier. Carries the offending location; household is
/// -1 when the failure is household-independent.
class EvaluationFailure : public std::runtime_error {
public:
    EvaluationFailure(const std::string& what, int household, int period)
        : std::runtime_error(what), household_(household), period_(period) {}

    int household() const noexcept { return household_; }
    int period() const noexcept { return period_; }

private:
    int household_;
    int period_;
};

}  // namespace ramsey
