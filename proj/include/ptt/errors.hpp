#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptt {

// Base class for all library errors.
struct PttError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ill-typed construction: application of a non-function, domain mismatch,
// reserved name used as a variable, and so on.
struct TypeError : PttError {
  using PttError::PttError;
};

// Syntax error with a 1-based source position.
struct ParseError : PttError {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : PttError(msg + " (line " + std::to_string(line_) + ", column " +
                 std::to_string(col_) + ")"),
        line(line_),
        column(col_) {}
  explicit ParseError(const std::string& msg) : PttError(msg) {}
};

// A finite enumeration would exceed the configured guard. This is the
// expected way to bail out of the tower-of-exponentials blow-up.
struct TooLargeError : PttError {
  using PttError::PttError;
};

// Evaluation hit a free variable the assignment does not cover.
struct UnboundVariableError : PttError {
  using PttError::PttError;
};

// A derivation-building operation was handed inputs of the wrong shape
// (e.g. MP on a premise that is not an implication).
struct ShapeMismatchError : PttError {
  using PttError::PttError;
};

// closed_prove was called on a formula with free variables.
struct NotClosedError : PttError {
  using PttError::PttError;
};

// Default guard: maximum number of values enumerated per type, maximum
// assignment-space size, maximum truth-table size.
inline constexpr std::uint64_t kDefaultGuard = 1u << 16;

}  // namespace ptt
