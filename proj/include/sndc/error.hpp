#pragma once

#include <stdexcept>
#include <string>

namespace sndc {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed input files, inconsistent descriptors.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Configuration file or command-line errors.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Ellipticity / Cordes check failed on the sampled data.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// Factorization or iterative solve failed.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace sndc

#define SNDC_REQUIRE(cond, ExceptionType, msg)  \
    do {                                        \
        if (!(cond)) throw ExceptionType(msg);  \
    } while (0)
