#pragma once

#include <stdexcept>
#include <string>

namespace liesym {

/// Base class for all engine-level failures (bad input, unsupported shape,
/// failed certification). Internal invariant violations use assertions.
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax or resolution failure while reading expression text.
/// Positions are 1-based.
struct ParseError : EngineError {
    int line;
    int col;
    ParseError(const std::string& msg, int line_, int col_)
        : EngineError(msg + " (line " + std::to_string(line_) + ", column " +
                      std::to_string(col_) + ")"),
          line(line_),
          col(col_) {}
};

}  // namespace liesym
