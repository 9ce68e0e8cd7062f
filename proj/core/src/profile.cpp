#include "pmr/profile.hpp"

#include <fstream>
#include <istream>
#include <regex>

#include <nlohmann/json.hpp>

#include "pmr/tokenizer.hpp"

namespace pmr {

using nlohmann::json;

std::string_view gender_name(Gender gender) { return gender == Gender::male ? "male" : "female"; }

namespace {

std::string join_messages(const std::vector<FieldError>& errors) {
  std::string text = "invalid profile";
  for (const auto& e : errors) text += "; " + e.field + ": " + e.message;
  return text;
}

std::optional<Gender> gender_word(std::string_view word) {
  const auto w = fold_case(word);
  if (w == "male" || w == "man" || w == "boy") return Gender::male;
  if (w == "female" || w == "woman" || w == "girl") return Gender::female;
  return std::nullopt;
}

}  // namespace

ProfileError::ProfileError(std::vector<FieldError> errors) : Error(join_messages(errors)), errors_(std::move(errors)) {}

std::optional<Demographic> parse_demographic(std::string_view text) {
  static const std::regex pattern(R"(^\s*(\d{1,3})[- ]years?[- ]old\s+([A-Za-z]+)\s*$)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) return std::nullopt;
  const int age = std::stoi(m[1].str());
  auto gender = gender_word(m[2].str());
  if (!gender || age > 130) return std::nullopt;
  return Demographic{age, *gender};
}

GeneEntry parse_gene_entry(std::string_view text) {
  text = trim(text);
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return {std::string(text), std::nullopt};
  GeneEntry entry{std::string(trim(text.substr(0, open))), std::string(trim(text.substr(open + 1, close - open - 1)))};
  if (entry.variant->empty()) entry.variant.reset();
  return entry;
}

std::vector<FieldError> validate(const PatientProfile& profile) {
  std::vector<FieldError> errors;
  if (trim(profile.disease).empty()) errors.push_back({"disease", "must not be empty"});
  if (profile.genes.empty()) errors.push_back({"genes", "at least one gene is required"});
  for (std::size_t i = 0; i < profile.genes.size(); ++i) {
    const auto& g = profile.genes[i];
    const std::string prefix = "genes[" + std::to_string(i) + "]";
    if (trim(g.name).empty()) errors.push_back({prefix + ".name", "must not be empty"});
    if (g.variant && trim(*g.variant).empty()) errors.push_back({prefix + ".variant", "must not be empty when present"});
  }
  if (profile.age && (*profile.age < 0 || *profile.age > 130)) errors.push_back({"age", "must be within [0, 130]"});
  return errors;
}

PatientProfile profile_from_json(const json& object, std::vector<std::string>* warnings) {
  std::vector<FieldError> errors;
  PatientProfile profile;
  if (!object.is_object()) throw ProfileError(std::vector<FieldError>{{"profile", "must be a JSON object"}});

  if (auto it = object.find("disease"); it == object.end() || !it->is_string()) {
    errors.push_back({"disease", "required string"});
  } else {
    profile.disease = std::string(trim(it->get_ref<const std::string&>()));
  }

  if (auto it = object.find("genes"); it == object.end() || !it->is_array()) {
    errors.push_back({"genes", "required array"});
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& g = (*it)[i];
      const std::string prefix = "genes[" + std::to_string(i) + "]";
      if (g.is_string()) {
        profile.genes.push_back(parse_gene_entry(g.get_ref<const std::string&>()));
      } else if (g.is_object()) {
        GeneEntry entry;
        auto name = g.find("name");
        if (name == g.end() || !name->is_string()) {
          errors.push_back({prefix + ".name", "required string"});
          continue;
        }
        entry.name = std::string(trim(name->get_ref<const std::string&>()));
        if (auto v = g.find("variant"); v != g.end() && !v->is_null()) {
          if (!v->is_string()) {
            errors.push_back({prefix + ".variant", "must be a string"});
            continue;
          }
          entry.variant = std::string(trim(v->get_ref<const std::string&>()));
        }
        profile.genes.push_back(std::move(entry));
      } else {
        errors.push_back({prefix, "must be a string or an object"});
      }
    }
  }

  if (auto it = object.find("demographic"); it != object.end() && !it->is_null()) {
    if (!it->is_string()) {
      errors.push_back({"demographic", "must be a string"});
    } else if (auto d = parse_demographic(it->get_ref<const std::string&>())) {
      profile.age = d->age;
      profile.gender = d->gender;
    } else if (warnings) {
      warnings->push_back("unparseable demographic '" + it->get<std::string>() + "'; age and gender left empty");
    }
  }
  if (auto it = object.find("age"); it != object.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      errors.push_back({"age", "must be an integer"});
    } else {
      profile.age = it->get<int>();
    }
  }
  if (auto it = object.find("gender"); it != object.end() && !it->is_null()) {
    auto g = it->is_string() ? gender_word(it->get_ref<const std::string&>()) : std::nullopt;
    if (!g) {
      errors.push_back({"gender", "must be \"male\" or \"female\""});
    } else {
      profile.gender = g;
    }
  }

  if (auto it = object.find("other"); it != object.end() && !it->is_null()) {
    auto add = [&](std::string_view s) {
      auto t = trim(s);
      if (!t.empty()) profile.other.emplace_back(t);
    };
    if (it->is_string()) {
      std::string_view all = it->get_ref<const std::string&>();
      std::size_t start = 0;
      while (start <= all.size()) {
        auto comma = all.find(',', start);
        add(all.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (it->is_array()) {
      for (const auto& o : *it) {
        if (!o.is_string()) {
          errors.push_back({"other", "must contain only strings"});
          break;
        }
        add(o.get_ref<const std::string&>());
      }
    } else {
      errors.push_back({"other", "must be a string or an array of strings"});
    }
  }

  for (auto& e : validate(profile)) {
    bool duplicate = false;
    for (const auto& seen : errors) duplicate = duplicate || seen.field == e.field;
    if (!duplicate) errors.push_back(std::move(e));
  }
  if (!errors.empty()) throw ProfileError(std::move(errors));
  return profile;
}

json to_json(const PatientProfile& profile) {
  json genes = json::array();
  for (const auto& g : profile.genes) {
    json entry{{"name", g.name}};
    if (g.variant) entry["variant"] = *g.variant;
    genes.push_back(std::move(entry));
  }
  json j{{"disease", profile.disease}, {"genes", std::move(genes)}, {"other", profile.other}};
  if (profile.age) j["age"] = *profile.age;
  if (profile.gender) j["gender"] = gender_name(*profile.gender);
  return j;
}

TopicParseResult parse_topics(std::istream& in, std::string_view source) {
  TopicParseResult result;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string(source) + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("topics")) doc = doc["topics"];
  if (!doc.is_array()) throw Error(std::string(source) + ": expected a JSON array of topics");

  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    std::string id;
    if (entry.is_object() && entry.contains("id")) {
      const auto& raw = entry["id"];
      id = raw.is_string() ? raw.get<std::string>() : raw.dump();
    }
    const std::string where = id.empty() ? "topic #" + std::to_string(i + 1) : "topic " + id;
    if (id.empty()) {
      result.issues.push_back({std::string(source), 0, where + " rejected: missing id"});
      ++result.rejected;
      continue;
    }
    std::vector<std::string> warnings;
    try {
      Topic topic{id, profile_from_json(entry, &warnings)};
      result.topics.push_back(std::move(topic));
    } catch (const ProfileError& e) {
      result.issues.push_back({std::string(source), 0, where + " rejected: " + e.what()});
      ++result.rejected;
    }
    for (const auto& w : warnings) result.issues.push_back({std::string(source), 0, where + ": " + w});
  }
  return result;
}

TopicParseResult parse_topics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topics file " + path.string());
  return parse_topics(in, path.string());
}

std::vector<std::string> default_treatment_keywords() {
  return {"treatment",    "surgery",      "therapy",          "radiotherapy", "immunotherapy",
          "chemotherapy", "targeted therapy", "resection", "prognosis"};
}

ExpandedProfile expand_profile(const PatientProfile& profile, const OntologyTables& tables,
                               const ExpansionOptions& options) {
  ExpandedProfile ep;
  ep.disease_terms = tables.diseases.synonyms(profile.disease);
  if (auto concept_id = tables.diseases.concept_of(profile.disease)) {
    const auto& drugs = tables.drugs.drugs_of(*concept_id);
    ep.drug_terms.insert(drugs.begin(), drugs.end());
  }

  for (const auto& gene : profile.genes) {
    ExpandedGene eg;
    eg.name = fold_case(gene.name);
    eg.gene_terms = tables.genes.synonyms(gene.name);
    auto concept_id = tables.genes.concept_of(gene.name);
    if (gene.variant && !trim(*gene.variant).empty()) {
      eg.specified_variant = fold_case(*gene.variant);
    } else if (options.use_variant_table && concept_id) {
      eg.candidate_variants = tables.variants.variants_of(*concept_id);
    }
    if (concept_id) {
      const auto& drugs = tables.drugs.drugs_of(*concept_id);
      ep.drug_terms.insert(drugs.begin(), drugs.end());
    }
    ep.genes.push_back(std::move(eg));
  }

  for (const auto& k : options.treatment_keywords) {
    auto folded = fold_case(k);
    if (!folded.empty()) ep.treatment_keywords.insert(std::move(folded));
  }
  ep.age = profile.age;
  ep.gender = profile.gender;
  for (const auto& o : profile.other) ep.other.push_back(fold_case(o));
  return ep;
}

json to_json(const ExpandedProfile& ep) {
  json genes = json::array();
  for (const auto& g : ep.genes) {
    json entry{{"name", g.name}, {"gene_terms", g.gene_terms}, {"candidate_variants", g.candidate_variants}};
    entry["specified_variant"] = g.specified_variant ? json(*g.specified_variant) : json(nullptr);
    genes.push_back(std::move(entry));
  }
  json j{{"disease_terms", ep.disease_terms},
         {"genes", std::move(genes)},
         {"drug_terms", ep.drug_terms},
         {"treatment_keywords", ep.treatment_keywords},
         {"other", ep.other}};
  j["age"] = ep.age ? json(*ep.age) : json(nullptr);
  j["gender"] = ep.gender ? json(gender_name(*ep.gender)) : json(nullptr);
  return j;
}

}  // namespace pmr
