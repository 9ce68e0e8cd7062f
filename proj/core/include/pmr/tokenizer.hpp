#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pmr {

/// Lowercases ASCII and splits on every non-alphanumeric byte.
std::vector<std::string> tokenize(std::string_view text);

/// ASCII lowercase plus surrounding whitespace trim. Used for every
/// case-insensitive key (terms, journals, variants).
std::string fold_case(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace pmr
