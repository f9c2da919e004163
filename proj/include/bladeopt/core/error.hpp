#pragma once

#include <stdexcept>
#include <string>

namespace bladeopt {

// Base of every error raised by the toolkit. The CLI maps ConfigError to
// exit code 2 and everything else to 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: unreadable or malformed files, unknown keys, violated invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Solver breakdown: NaN propagation, singular systems, eigen failures.
class NumericalError : public Error {
public:
    using Error::Error;
};

class StructuralError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class TopologyError : public StructuralError {
public:
    using StructuralError::StructuralError;
};

#define BLADEOPT_REQUIRE(cond, ErrType, msg)        \
    do {                                            \
        if (!(cond)) throw ErrType(std::string(msg)); \
    } while (0)

} // namespace bladeopt
