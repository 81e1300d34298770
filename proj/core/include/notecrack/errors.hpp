#pragma once

#include <stdexcept>
#include <string>

namespace notecrack {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data: token grammar violations, bad file formats.
/// Carries a 1-based line and column when known (0 = unknown).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(with_position(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string with_position(const std::string& what, int line, int column) {
        if (line <= 0) return what;
        std::string s = what + " (line " + std::to_string(line);
        if (column > 0) s += ", column " + std::to_string(column);
        return s + ")";
    }

    int line_;
    int column_;
};

}  // namespace notecrack
