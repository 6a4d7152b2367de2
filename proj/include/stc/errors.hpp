#pragma once

#include <stdexcept>
#include <string>

namespace stc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact integer arithmetic would exceed the configured width.
struct OverflowError : Error {
    using Error::Error;
};

/// A generation request exceeds the configured memory/size guard.
struct ResourceError : Error {
    using Error::Error;
};

/// Two objects that must share a multiset spec or shape do not.
struct DomainMismatchError : Error {
    using Error::Error;
};

/// Requested rate/cardinality cannot be served by the given construction.
struct InvalidRateError : Error {
    using Error::Error;
};

/// Inconsistent manifold or matrix dimensions.
struct DimensionError : Error {
    using Error::Error;
};

/// A numerical invariant (unit norm, orthonormal columns, ...) is violated.
struct InvariantViolation : Error {
    using Error::Error;
};

/// Codebook or config file cannot be parsed.
struct IoError : Error {
    using Error::Error;
};

} // namespace stc
