#pragma once

#include <stdexcept>
#include <string>

namespace horizon {

// Root of every error raised by the library. The CLI maps ValidationError
// (and subclasses) to exit code 2 and NumericalError to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// Closed-form expression requested outside its documented asymptotic window.
class ValidityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class PoleAtOrigin : public DomainError {
public:
    using DomainError::DomainError;
};

class StencilError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateRates : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DensityUndefined : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TailMismatch : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace horizon
