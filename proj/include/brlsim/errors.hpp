#pragma once

#include <stdexcept>

namespace brlsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid numeric input: non-positive price, alpha <= 0, rho outside (0,1), ...
struct DomainError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

// Initial prices outside [p_min, p_max]^n; the convergence theory only covers the box.
struct BoxError : DomainError {
    using DomainError::DomainError;
};

// Iteration cap exceeded in a root finder or fixed-point loop. Given the
// monotone bracketing this signals a bug or an invalid market.
struct SolverError : Error {
    using Error::Error;
};

// The independent cross-check oracle failed to converge (mis-tuned step),
// as opposed to the engine itself misbehaving.
struct OracleError : Error {
    using Error::Error;
};

// Config files, market files, belief files: parse and validation failures.
struct ConfigError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

}  // namespace brlsim
