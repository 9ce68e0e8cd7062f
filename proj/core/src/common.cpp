#include "pmr/common.hpp"

#include <algorithm>
#include <optional>
#include <charconv>
#include <cstdint>

namespace pmr {

std::string Issue::to_string() const {
  std::string text = source;
  if (line > 0) text += ":" + std::to_string(line);
  if (!text.empty()) text += ": ";
  return text + message;
}

namespace {

std::optional<std::uint64_t> as_integer(std::string_view text) {
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

bool TopicLess::operator()(std::string_view a, std::string_view b) const {
  auto ia = as_integer(a);
  auto ib = as_integer(b);
  if (ia && ib) return *ia != *ib ? *ia < *ib : a < b;
  if (ia || ib) return ia.has_value();
  return a < b;
}

}  // namespace pmr
