#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsysgen {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in an L-system spec file. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ResourceLimitError : public Error {
public:
    using Error::Error;
};

class BackendError : public Error {
public:
    using Error::Error;
};

/// Raised by the oracle when the heap model is violated. Always a generator bug.
class OracleError : public Error {
public:
    using Error::Error;
};

} // namespace lsysgen
