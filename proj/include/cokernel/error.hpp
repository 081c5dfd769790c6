#pragma once

#include <stdexcept>
#include <string>

namespace cokernel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (non-prime p, zero modulus, unknown name, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operands that cannot be combined, e.g. elements of different rings.
class UsageError : public Error {
public:
    using Error::Error;
};

class NonUnitError : public Error {
public:
    using Error::Error;
};

/// A result or configuration does not fit in a machine word.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Requested precision exceeds the word-size bound of the local ring.
class PrecisionRangeError : public RangeError {
public:
    using RangeError::RangeError;
};

class OracleBudgetError : public Error {
public:
    using Error::Error;
};

/// Malformed config file or text literal.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Strict-balance run with an unbalanced entry distribution.
class BalanceError : public Error {
public:
    using Error::Error;
};

/// A run whose indeterminate-trial rate is too high to be meaningful.
class DiagnosticsError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cokernel
