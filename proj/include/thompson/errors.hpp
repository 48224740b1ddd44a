#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thompson {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (non-finite input, evaluation point outside [0,1], epsilon out of range, ...).
struct DomainError : Error {
    using Error::Error;
};

/// A piecewise-linear map violates a structural precondition
/// (not strictly increasing, wrong endpoints, failed Thompson validation
/// where validity is required).
struct InvalidElement : Error {
    using Error::Error;
};

/// Two maps live on different spaces (interval vs circle lift).
struct SpaceMismatch : Error {
    using Error::Error;
};

/// Expression or file could not be parsed. `offset` is a byte position
/// into the offending text where known.
struct ParseError : Error {
    explicit ParseError(const std::string& what, std::size_t offset_ = 0)
        : Error(what), offset(offset_) {}
    std::size_t offset;
};

/// An input function failed diffeomorphism validation (endpoints off,
/// derivative not positive, lift identity broken).
struct InvalidDiffeo : Error {
    using Error::Error;
};

/// The approximation construction could not complete (empty target window
/// after shrinking, piece budget exceeded).
struct ConstructionError : Error {
    using Error::Error;
};

/// Raised by the discreteness scan when the input has derivative
/// identically 1: no power-of-2 gap exists for rotations.
struct RotationInput : Error {
    using Error::Error;
};

} // namespace thompson
