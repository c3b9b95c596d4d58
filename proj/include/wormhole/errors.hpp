#pragma once

#include <stdexcept>
#include <string>

namespace wormhole {

/// Base of every error thrown by the library. The CLI maps the three
/// families below onto its exit codes (usage, numerical, resource).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid input: bad parameter, negative time, |k| > 1 ...
class DomainError : public Error {
public:
    using Error::Error;
};

// Numerical failure of an otherwise valid request.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StepSizeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFiniteError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OutOfRangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoRootError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegeneracyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TrotterError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Request exceeds a hard size cap (Hilbert dimension, string basis).
class ResourceError : public Error {
public:
    using Error::Error;
};

class BasisOverflowError : public ResourceError {
public:
    using ResourceError::ResourceError;
};

} // namespace wormhole
