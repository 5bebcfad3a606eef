#ifndef NETDIFF_ERRORS_HPP
#define NETDIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netdiff {

/// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible shapes (matrix/vector/graph dimensions).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value violates a domain precondition (non-finite entry, parameter
/// out of range, undefined statistic).
class DomainError : public Error {
public:
    using Error::Error;
};

/// (I - A) or A could not be factorized; carries a reciprocal condition
/// number estimate from the LU factorization.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double rcond_estimate)
        : Error(what), rcond(rcond_estimate) {}
    double rcond;
};

/// An iterative eigenvalue/singular-value routine hit its iteration cap.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// The diffusion process does not converge (spectral radius >= 1); the
/// offending radius is carried for diagnostics.
class DivergentModelError : public Error {
public:
    DivergentModelError(const std::string& what, double spectral_radius)
        : Error(what), rho(spectral_radius) {}
    double rho;
};

/// Malformed input file; line is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line_number = 0)
        : Error(line_number > 0 ? what + " (line " + std::to_string(line_number) + ")"
                                : what),
          line(line_number) {}
    long line;
};

/// Caller-side misuse of a public entry point (bad flag combination,
/// too few inputs for an operation).
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace netdiff

#endif
