#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset into the source.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), message_(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }
    /// The description without the position.
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t offset_;
};

/// A function evaluated outside its domain (log of a nonpositive number, division by ~0, ...).
/// `offset` is the source position of the offending node, or -1 for built trees.
class DomainError : public Error {
public:
    DomainError(const std::string& what, long offset)
        : Error(offset >= 0 ? what + " (expression offset " + std::to_string(offset) + ")" : what),
          offset_(offset) {}
    long offset() const noexcept { return offset_; }

private:
    long offset_;
};

class DegenerateMetricError : public Error {
public:
    using Error::Error;
};

/// Operation undefined in the requested dimension (Weyl for n <= 3, Eardley for n != 4, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A definition failed its structural validation (contact identities, f > 0, signature, ...).
class StructureError : public Error {
public:
    using Error::Error;
};

/// Metric definition file errors carry a 1-based line number.
class FileFormatError : public Error {
public:
    FileFormatError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A named item (catalog entry, verification target) does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace curvlab
