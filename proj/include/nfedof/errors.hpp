#pragma once

#include <stdexcept>
#include <string>

namespace nfedof {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad size, out-of-range order, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Function evaluated outside its mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Two points closer than the Green's function guard distance.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Ill-conditioned or non-convergent numerical step.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Requested problem exceeds the configured size/memory guard.
class ResourceError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nfedof
