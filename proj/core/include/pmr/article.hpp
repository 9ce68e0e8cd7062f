#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pmr {

enum class Field : std::uint8_t { title = 0, abstract = 1, keywords = 2 };

inline constexpr std::array<Field, 3> kFields{Field::title, Field::abstract, Field::keywords};
inline constexpr std::size_t kFieldCount = kFields.size();

std::string_view field_name(Field field);
std::optional<Field> parse_field(std::string_view name);

/// One abstract record. `year` is 0 when the source had none.
struct Article {
  std::string pmid;
  std::string title;
  std::string abstract;
  std::vector<std::string> keywords;
  std::vector<std::string> mesh_codes;
  std::string journal;
  int year = 0;

  /// Raw text of a field; keywords are joined with single spaces.
  std::string field_text(Field field) const;

  bool operator==(const Article&) const = default;
};

inline constexpr int kMinYear = 1800;
inline constexpr int kMaxYear = 2100;

/// True iff any MeSH code falls in the diseases (C) or chemicals and
/// drugs (D) trees.
bool mesh_filter(const Article& article);

/// Parses one corpus record. Throws pmr::Error describing the first
/// schema violation.
Article article_from_json(const nlohmann::json& record);
nlohmann::json to_json(const Article& article);

}  // namespace pmr
