#ifndef FIXDIFF_ERROR_HPP
#define FIXDIFF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fixdiff {

/// Thrown when two values or series from different semirings (or different
/// variable contexts) meet in one operation.
class DomainMismatchError : public std::invalid_argument {
public:
    explicit DomainMismatchError(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Input-text error with a position. Messages are deterministic so they can
/// be golden-tested.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace fixdiff

#endif
