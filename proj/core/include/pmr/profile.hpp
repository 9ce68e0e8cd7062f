#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pmr/common.hpp"
#include "pmr/ontology.hpp"

namespace pmr {

enum class Gender { male, female };

std::string_view gender_name(Gender gender);

struct GeneEntry {
  std::string name;
  std::optional<std::string> variant;

  bool operator==(const GeneEntry&) const = default;
};

struct PatientProfile {
  std::string disease;
  std::vector<GeneEntry> genes;
  std::optional<int> age;
  std::optional<Gender> gender;
  std::vector<std::string> other;

  bool operator==(const PatientProfile&) const = default;
};

struct Topic {
  std::string id;
  PatientProfile profile;
};

/// Field-level validation failure, e.g. {"genes[1].name", "must not be empty"}.
struct FieldError {
  std::string field;
  std::string message;
};

class ProfileError : public Error {
 public:
  explicit ProfileError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

struct Demographic {
  int age = 0;
  Gender gender = Gender::female;
};

/// "61-year-old female" -> {61, female}. Anything else -> nullopt.
std::optional<Demographic> parse_demographic(std::string_view text);

/// "KRAS (G12C)" -> {KRAS, G12C}; "BRAF" -> {BRAF, none}.
GeneEntry parse_gene_entry(std::string_view text);

std::vector<FieldError> validate(const PatientProfile& profile);

/// Reads one profile object. Genes may be objects {name, variant?} or
/// strings in "NAME (VARIANT)" form; demographics may be given as a
/// `demographic` string or explicit `age`/`gender` fields. An
/// unparseable demographic string adds a warning to `warnings` and
/// leaves age and gender empty. Throws ProfileError on invalid input.
PatientProfile profile_from_json(const nlohmann::json& object, std::vector<std::string>* warnings = nullptr);
nlohmann::json to_json(const PatientProfile& profile);

struct TopicParseResult {
  std::vector<Topic> topics;
  std::size_t rejected = 0;
  Issues issues;
};

/// Topics file: JSON array of {id, disease, genes[], demographic, other[]}.
/// Invalid topics are rejected individually and reported.
TopicParseResult parse_topics(std::istream& in, std::string_view source = "topics");
TopicParseResult parse_topics(const std::filesystem::path& path);

struct ExpandedGene {
  std::string name;  // folded
  TermSet gene_terms;
  std::optional<std::string> specified_variant;
  TermSet candidate_variants;  // empty whenever specified_variant is set

  bool operator==(const ExpandedGene&) const = default;
};

struct ExpandedProfile {
  TermSet disease_terms;
  std::vector<ExpandedGene> genes;
  TermSet drug_terms;
  TermSet treatment_keywords;
  std::optional<int> age;
  std::optional<Gender> gender;
  std::vector<std::string> other;  // folded

  bool operator==(const ExpandedProfile&) const = default;
};

std::vector<std::string> default_treatment_keywords();

struct ExpansionOptions {
  std::vector<std::string> treatment_keywords = default_treatment_keywords();
  /// When false the variant table is not consulted, so unspecified genes
  /// get no candidate variants.
  bool use_variant_table = true;
};

ExpandedProfile expand_profile(const PatientProfile& profile, const OntologyTables& tables,
                               const ExpansionOptions& options = {});

nlohmann::json to_json(const ExpandedProfile& expanded);

}  // namespace pmr
