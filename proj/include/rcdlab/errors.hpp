#pragma once

#include <stdexcept>
#include <string>

namespace rcdlab {

/// Root of every error the library raises on invalid input or a broken
/// invariant.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverlapError : public Error {
public:
    using Error::Error;
};

class CoverError : public Error {
public:
    using Error::Error;
};

class EmptyBlockError : public Error {
public:
    using Error::Error;
};

/// Conditioning on an event of zero mass.
class NullConditioningError : public Error {
public:
    using Error::Error;
};

/// Weights negative, not summing to one, or indices out of range.
class InvalidMeasure : public Error {
public:
    using Error::Error;
};

/// Two objects built over spaces of different size were combined.
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

/// A finite instance contradicted an implication that must hold; always an
/// implementation defect.
class InconsistentVerdict : public Error {
public:
    using Error::Error;
};

class AtomlessViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rcdlab
