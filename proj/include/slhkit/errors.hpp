#pragma once

#include <stdexcept>
#include <string>

namespace slh {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problems caused by user-supplied input (malformed files, invalid circuits,
// bad CLI arguments).  The command-line driver maps these to exit code 1;
// anything else that escapes is treated as an internal error (exit code 2).
struct UserError : Error {
  using Error::Error;
};

struct NetlistParseError : UserError {
  NetlistParseError(const std::string& msg, int line_, int col_)
      : UserError(msg + " (line " + std::to_string(line_) + ", column " +
                  std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

struct ValidationError : UserError {
  using UserError::UserError;
};

struct TermParseError : UserError {
  using UserError::UserError;
};

struct OperatorParseError : UserError {
  using UserError::UserError;
};

// Structural misuse of the circuit algebra: arity mismatches in a series
// product, feedback port indices out of range, malformed permutations.
struct TermError : UserError {
  using UserError::UserError;
};

// Feedback elimination requires inverting (1 - S_ij); when that operator is
// singular the requested loop has no well-defined reduction.
struct SingularFeedbackError : UserError {
  using UserError::UserError;
};

struct UnboundSymbolError : UserError {
  explicit UnboundSymbolError(const std::string& sym)
      : UserError("no numeric binding for symbol '" + sym + "'"), symbol(sym) {}
  std::string symbol;
};

}  // namespace slh
