// errors.hpp: exception hierarchy shared by every opexp module

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opexp {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Errors caused by malformed arguments. The CLI maps these to usage errors.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidDimension : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class OutOfRange : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DimensionMismatch : public InvalidArgument {
public:
    DimensionMismatch(const std::string& where, std::ptrdiff_t lhs, std::ptrdiff_t rhs);
};

// A precondition on the mathematical structure of an input was violated.
class ContractViolation : public Error {
public:
    using Error::Error;
};

// Errors raised by numerical guards. The CLI maps these to exit code 3.
class NumericalGuard : public Error {
public:
    using Error::Error;
};

// Fock-space truncation loses more probability than allowed.
class TruncationError : public NumericalGuard {
public:
    TruncationError(const std::string& what, double tail_mass, std::ptrdiff_t suggested_dim);

    double tail_mass() const noexcept { return tail_mass_; }
    std::ptrdiff_t suggested_dim() const noexcept { return suggested_dim_; }

private:
    double tail_mass_;
    std::ptrdiff_t suggested_dim_;
};

// An infinite series did not meet its stopping criterion within the term cap.
class SeriesError : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

class IntegrationError : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

// The closed form is not defined for this operator pair (non-Hermitian or indefinite square).
class UnsupportedInstance : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

// Argument outside the representable range of a special function.
class RangeError : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

// Quadrature grid too coarse or too narrow for the requested functions.
class ResolutionError : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

// A density matrix failed its Hermiticity, trace or positivity check.
class InvariantViolation : public NumericalGuard {
public:
    using NumericalGuard::NumericalGuard;
};

} // namespace opexp
