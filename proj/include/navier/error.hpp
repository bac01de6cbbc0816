#pragma once

#include <stdexcept>
#include <string>

namespace navier {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: degenerate grids, incompatible fields, malformed specs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not reach its tolerance.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_;
    int iterations_;
};

}  // namespace navier
