#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aisinmaca {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Value outside the domain of an operation (e.g. a feature outside [0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class StateSpaceTooLarge : public Error {
public:
    using Error::Error;
};

// Malformed text input. line() is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class VersionError : public Error {
public:
    using Error::Error;
};

}  // namespace aisinmaca
