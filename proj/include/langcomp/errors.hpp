#pragma once

#include <stdexcept>
#include <string>

namespace langcomp {

/// Input outside the documented range of a parameter or state.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A pair of speakers with no shared vocabulary in either language.
class NoCommunicationError : public ValidationError {
public:
    NoCommunicationError()
        : ValidationError("no communication possible: both mutualities are zero") {}
};

/// Evaluation requested at a point where the operation is not defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The equilibrium exponent 1/(beta - alpha + 1) has a zero denominator.
class DegenerateExponentError : public DomainError {
public:
    DegenerateExponentError()
        : DomainError("degenerate exponent: alpha - beta = 1") {}
};

/// Direct M1 <-> M2 transitions do not exist in the model.
class UnsupportedTransitionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace langcomp
