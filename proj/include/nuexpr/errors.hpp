#ifndef NUEXPR_ERRORS_HPP
#define NUEXPR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nuexpr {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on malformed expression text; carries a 1-based source position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& what_)
        : Error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + what_),
          line(line_),
          column(column_) {}
};

} // namespace nuexpr

#endif
