#pragma once

#include <stdexcept>
#include <string>

namespace nsfd_epi {

/// Input outside the mathematical domain of an operation (non-finite state,
/// h <= 0, division by a zero rate, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested point is not an equilibrium of the given model variant.
class NotAnEquilibriumError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The interior quadratic has a vanishing leading coefficient.
class DegenerateQuadraticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Variant-forced parameters are not zero.
class VariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time stepper produced a non-finite state.
class BlowUpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nsfd_epi
