#pragma once

#include <stdexcept>
#include <string>

namespace dimerwave {

/** Base for every error raised by the library. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments: non-finite samples, parameters outside the admissible region.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed (divergence, stagnation, no bracket).
class SolverError : public Error {
public:
    SolverError(const std::string& what, double last_residual = 0.0)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

/// The grid cannot represent the requested quantity to tolerance.
class ResolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace dimerwave
