#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mivc {

// Half-open byte range plus 1-based line/column of the start, enough to
// point a user at the offending text.
struct SourceSpan {
  size_t begin = 0;
  size_t end = 0;
  int line = 0;
  int column = 0;

  bool contains(const SourceSpan& inner) const {
    return inner.begin >= begin && inner.end <= end;
  }
  std::string describe() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(SourceSpan s, const std::string& msg)
      : std::runtime_error(s.describe() + ": " + msg), span(s) {}
};

struct TypeError : std::runtime_error {
  SourceSpan span;
  TypeError(SourceSpan s, const std::string& msg)
      : std::runtime_error(s.describe() + ": " + msg), span(s) {}
};

struct ElaborationError : std::runtime_error {
  explicit ElaborationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mivc
