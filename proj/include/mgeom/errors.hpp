#pragma once
#ifndef MGEOM_ERRORS_HPP
#define MGEOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mgeom {

/// Base class of every exception thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    /// True when the failure traces back to caller-supplied input.
    virtual bool user_error() const noexcept { return true; }
};

/// Structurally invalid input: asymmetric matrix, negative entry, bad JSON.
struct MalformedInput : Error {
    using Error::Error;
};

/// Declared kind does not fit the requested operation.
struct KindMismatch : Error {
    using Error::Error;
};

/// Argument outside the operation's domain.
struct DomainError : Error {
    using Error::Error;
};

/// Enumeration or search larger than the configured budget.
struct SizeError : Error {
    using Error::Error;
};

/// A documented precondition of a construction is violated.
struct PreconditionError : Error {
    using Error::Error;
};

/// A float comparison could not be decided within its error bound.
struct AmbiguousComparison : Error {
    using Error::Error;
    bool user_error() const noexcept override { return false; }
};

/// Broken internal invariant.
struct InternalError : Error {
    using Error::Error;
    bool user_error() const noexcept override { return false; }
};

}  // namespace mgeom

#endif  // MGEOM_ERRORS_HPP
