#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A machine description that cannot be executed (see validate_spec).
class SpecError : public Error {
public:
    using Error::Error;
};

/// Malformed spec text. `line` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input word containing a symbol outside the input alphabet.
class InputError : public Error {
public:
    InputError(std::size_t position, const std::string& what)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Raised during a step when the selected action cannot be carried out,
/// e.g. popping an empty queue under a wildcard match.
class ExecutionFault : public Error {
public:
    using Error::Error;
};

}  // namespace qmlab
