#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pmr {

/// Fatal error raised for unreadable inputs and violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A recoverable problem found while reading an input file. Line numbers
/// are 1-based; 0 means the issue is not tied to a line.
struct Issue {
  std::string source;
  std::size_t line = 0;
  std::string message;

  std::string to_string() const;
};

using Issues = std::vector<Issue>;

/// Orders topic ids numerically when both are integers, lexically otherwise.
/// Integers sort before non-integers.
struct TopicLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const;
};

}  // namespace pmr
