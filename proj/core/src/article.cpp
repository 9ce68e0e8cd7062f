#include "pmr/article.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "pmr/common.hpp"

namespace pmr {

using nlohmann::json;

std::string_view field_name(Field field) {
  switch (field) {
    case Field::title: return "title";
    case Field::abstract: return "abstract";
    case Field::keywords: return "keywords";
  }
  return "?";
}

std::optional<Field> parse_field(std::string_view name) {
  for (Field f : kFields)
    if (field_name(f) == name) return f;
  return std::nullopt;
}

std::string Article::field_text(Field field) const {
  switch (field) {
    case Field::title: return title;
    case Field::abstract: return abstract;
    case Field::keywords: {
      std::string joined;
      for (const auto& k : keywords) {
        if (!joined.empty()) joined.push_back(' ');
        joined += k;
      }
      return joined;
    }
  }
  return {};
}

bool mesh_filter(const Article& article) {
  for (const auto& code : article.mesh_codes)
    if (!code.empty() && (code.front() == 'C' || code.front() == 'D')) return true;
  return false;
}

namespace {

std::string string_field(const json& record, const char* key, bool required) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) throw Error(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw Error(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return {};
  if (it->is_string()) return {it->get<std::string>()};
  if (!it->is_array()) throw Error(std::string("field '") + key + "' must be an array of strings");
  std::vector<std::string> values;
  for (const auto& v : *it) {
    if (!v.is_string()) throw Error(std::string("field '") + key + "' must be an array of strings");
    values.push_back(v.get<std::string>());
  }
  return values;
}

}  // namespace

Article article_from_json(const json& record) {
  if (!record.is_object()) throw Error("record is not an object");
  static constexpr const char* kKnown[] = {"pmid", "title", "abstract", "keywords", "mesh", "journal", "year"};
  for (const auto& [key, _] : record.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw Error("unknown field '" + key + "'");
  }

  Article a;
  auto pmid = record.find("pmid");
  if (pmid == record.end() || pmid->is_null()) throw Error("missing field 'pmid'");
  if (pmid->is_number_unsigned()) {
    a.pmid = std::to_string(pmid->get<std::uint64_t>());
  } else if (pmid->is_string()) {
    a.pmid = pmid->get<std::string>();
  } else {
    throw Error("field 'pmid' must be a string or unsigned integer");
  }
  if (a.pmid.empty()) throw Error("empty pmid");
  for (char c : a.pmid)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') throw Error("pmid contains whitespace");

  a.title = string_field(record, "title", false);
  a.abstract = string_field(record, "abstract", false);
  a.keywords = string_list(record, "keywords");
  a.mesh_codes = string_list(record, "mesh");
  a.journal = string_field(record, "journal", false);

  auto year = record.find("year");
  if (year != record.end() && !year->is_null()) {
    long long y = 0;
    if (year->is_number_integer()) {
      y = year->get<long long>();
    } else if (year->is_string() && !year->get<std::string>().empty()) {
      const auto& s = year->get_ref<const std::string&>();
      std::size_t used = 0;
      try {
        y = std::stoll(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size()) throw Error("field 'year' is not an integer");
    } else if (!year->is_string()) {
      throw Error("field 'year' is not an integer");
    }
    if (y != 0 && (y < kMinYear || y > kMaxYear))
      throw Error("year " + std::to_string(y) + " outside [1800, 2100]");
    a.year = static_cast<int>(y);
  }
  return a;
}

json to_json(const Article& a) {
  json j;
  j["pmid"] = a.pmid;
  j["title"] = a.title;
  j["abstract"] = a.abstract;
  j["keywords"] = a.keywords;
  j["mesh"] = a.mesh_codes;
  j["journal"] = a.journal;
  if (a.year != 0) {
    j["year"] = a.year;
  } else {
    j["year"] = nullptr;
  }
  return j;
}

}  // namespace pmr
