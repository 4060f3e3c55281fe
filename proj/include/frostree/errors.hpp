#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frostree {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A step of the construction found no active vertex, or the sequence is
/// otherwise unusable for the requested operation.
class InvalidSequence : public Error {
public:
    using Error::Error;
};

class StateSpaceExceeded : public Error {
public:
    using Error::Error;
};

class SelfGraft : public Error {
public:
    using Error::Error;
};

class NotReducible : public Error {
public:
    using Error::Error;
};

class TargetUnreachable : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed sequence text. `offset()` is the byte offset of the offending
/// character in the input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace frostree
