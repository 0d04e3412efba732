#pragma once

#include <stdexcept>
#include <string>

namespace slv {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation (u <= 0, alpha
/// outside (1,2), ...).
struct DomainError : Error {
    using Error::Error;
};

/// A model whose invariants do not hold (e.g. a2 + a3 = 0).
struct ModelError : Error {
    using Error::Error;
};

/// Quadrature non-convergence, non-finite state, and similar numeric failures.
struct NumericError : Error {
    using Error::Error;
};

/// Malformed or incomplete configuration input.
struct ConfigError : Error {
    using Error::Error;
};

/// Usage errors (unknown selector, bad subcommand arguments).
struct UsageError : Error {
    using Error::Error;
};

} // namespace slv
