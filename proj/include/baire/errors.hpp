#pragma once

#include <stdexcept>
#include <string>

namespace baire {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation
/// (value not in [0,1], precision < 1, bad base, truncation past the end).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Value outside fitted normalization bounds.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Tree level outside 1..precision.
class LevelError : public Error {
public:
    using Error::Error;
};

/// Operands disagree on base, precision or dimension.
class MismatchError : public Error {
public:
    using Error::Error;
};

class DuplicateIdError : public Error {
public:
    using Error::Error;
};

class UnknownIdError : public Error {
public:
    using Error::Error;
};

class EmptyIndexError : public Error {
public:
    using Error::Error;
};

/// Member query on an index holding a single record.
class NoNeighborError : public Error {
public:
    using Error::Error;
};

class FormatVersionError : public Error {
public:
    using Error::Error;
};

/// Truncated file, bad checksum, or unparsable content.
class CorruptionError : public Error {
public:
    using Error::Error;
};

}  // namespace baire
