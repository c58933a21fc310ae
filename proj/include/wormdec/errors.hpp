// errors.hpp — exception types shared by the library and the scenario harness

#pragma once

#include <stdexcept>
#include <string>

namespace wormdec {

// Operator or state dimension outside the supported range, or two operands disagree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Physical parameter outside the domain of a formula (k >= R0^2, pi(alpha) <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Non-finite values or truncation overflow during time integration.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationOverflow : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace wormdec
