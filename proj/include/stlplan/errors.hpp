#pragma once

#include <stdexcept>
#include <string>

namespace stlplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexical or grammatical problem in a mission formula, with 1-based source position.
struct ParseError : Error {
  ParseError(const std::string& message, int line_, int column_)
      : Error(message + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
  int line;
  int column;
};

// A temporal interval discretizes to no sample, or the window starts past the trace end.
struct EmptyWindowError : Error {
  using Error::Error;
};

// The trace is too short to cover the formula horizon at the requested sample.
struct InsufficientTraceError : Error {
  using Error::Error;
};

// A mission violates one of its structural requirements.
struct InvalidSpecError : Error {
  using Error::Error;
};

// A mission file failed to load; messages carry section.key field paths.
struct MissionFileError : Error {
  using Error::Error;
};

}  // namespace stlplan
