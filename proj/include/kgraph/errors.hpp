#pragma once

#include <stdexcept>
#include <string>

namespace kgraph {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// compose() called on paths with s(lambda) != r(mu).
struct NotComposable : Error {
  using Error::Error;
};

/// segment() called with degrees outside 0 <= m <= n <= d(lambda).
struct DegreeOutOfRange : Error {
  using Error::Error;
};

/// An operation on a window-generated graph needed structure that lies
/// outside the materialized window. Never silently truncated.
struct WindowExceeded : Error {
  using Error::Error;
};

/// Strict skew construction found an edge whose source fiber leaves the
/// window.
struct WindowNotClosed : Error {
  using Error::Error;
};

/// Attempt to build a graph from a failing validation report.
struct InvalidGraph : Error {
  using Error::Error;
};

struct UnknownBuiltin : Error {
  using Error::Error;
};

struct BadParams : Error {
  using Error::Error;
};

struct NotRank1 : Error {
  using Error::Error;
};

struct NotStronglyConnected : Error {
  using Error::Error;
};

struct HasSinks : Error {
  using Error::Error;
};

/// Component matrices of a finite graph failed to commute; indicates an
/// invalid rule set slipped past validation.
struct NonCommuting : Error {
  using Error::Error;
};

/// The requested preorder/arithmetic is not decidable for this semigroup.
struct UnsupportedSemigroup : Error {
  using Error::Error;
};

/// A simplicity report was asked to apply a theorem whose hypotheses the
/// input does not satisfy; names the missing hypothesis.
struct HypothesisUnmet : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& what, int line_, int column_)
      : Error(what + " (line " + std::to_string(line_) + ", column " +
              std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

}  // namespace kgraph
