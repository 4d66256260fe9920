#pragma once

#include <stdexcept>
#include <string>

namespace mmtnc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A parameter that is well formed but not supported (e.g. non power-of-two n for AAB).
class UnsupportedParameter : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

class SpecMismatch : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class NotAcyclic : public Error {
public:
    using Error::Error;
};

/// Internal invariant breach: a builder or schedule produced something impossible.
class StructuralError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace mmtnc
