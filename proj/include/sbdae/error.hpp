#pragma once

#include <stdexcept>
#include <string>

namespace sbdae {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Shapes or parameters that violate an operation's preconditions.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// NaN/Inf showed up during training or evaluation.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace sbdae
