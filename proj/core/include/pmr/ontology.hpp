#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "pmr/common.hpp"

namespace pmr {

using TermSet = std::set<std::string, std::less<>>;

/// Bidirectional concept <-> surface-term map. Terms are case-folded on
/// insertion and lookup; each term belongs to exactly one concept.
class SynonymTable {
 public:
  /// Returns false (and leaves the table unchanged) when the folded term
  /// already belongs to a different concept or either side is empty.
  bool add(std::string_view concept_id, std::string_view term);

  std::optional<std::string> concept_of(std::string_view term) const;
  const TermSet& terms_of(std::string_view concept_id) const;

  /// All surface terms of the concept owning `term`, or {fold(term)} when
  /// the term is unknown.
  TermSet synonyms(std::string_view term) const;

  std::size_t concept_count() const { return by_concept_.size(); }
  std::size_t term_count() const { return by_term_.size(); }

  /// Canonical "concept\tterm" lines sorted by concept then term.
  void dump(std::ostream& out) const;

 private:
  std::map<std::string, TermSet, std::less<>> by_concept_;
  std::map<std::string, std::string, std::less<>> by_term_;
};

/// Multi-valued concept -> folded value map, shared by the variant and
/// drug-association tables.
class AssociationTable {
 public:
  bool add(std::string_view key, std::string_view value);
  const TermSet& values_of(std::string_view key) const;
  std::size_t key_count() const { return entries_.size(); }
  void dump(std::ostream& out) const;

 private:
  std::map<std::string, TermSet, std::less<>> entries_;
};

/// Gene concept id -> known variant strings.
class VariantTable : public AssociationTable {
 public:
  const TermSet& variants_of(std::string_view gene_concept) const { return values_of(gene_concept); }
};

/// Disease or gene concept id -> associated drug names.
class DrugAssociations : public AssociationTable {
 public:
  const TermSet& drugs_of(std::string_view concept_id) const { return values_of(concept_id); }
};

/// Folded journal name -> H5 index.
class JournalImpact {
 public:
  bool add(std::string_view journal, int h5);
  /// 0 for unknown journals.
  int impact_of(std::string_view journal) const;
  std::size_t size() const { return entries_.size(); }
  void dump(std::ostream& out) const;

 private:
  std::map<std::string, int, std::less<>> entries_;
};

struct OntologyTables {
  SynonymTable diseases;
  SynonymTable genes;
  VariantTable variants;
  DrugAssociations drugs;
  JournalImpact journals;
};

struct OntologyPaths {
  std::filesystem::path diseases;
  std::filesystem::path genes;
  std::filesystem::path variants;
  std::filesystem::path drugs;
  std::filesystem::path journals;

  /// diseases.tsv, genes.tsv, variants.tsv, drugs.tsv and journals.tsv
  /// inside `dir`.
  static OntologyPaths in_directory(const std::filesystem::path& dir);
};

struct LoadedTables {
  OntologyTables tables;
  Issues issues;
};

/// Loads all five tables. A missing file throws pmr::Error naming it;
/// malformed lines are skipped and reported.
LoadedTables load_tables(const OntologyPaths& paths);

// Stream-level readers behind load_tables. `source` labels issues.
void read_synonyms(std::istream& in, std::string_view source, SynonymTable& table, Issues& issues);
void read_associations(std::istream& in, std::string_view source, AssociationTable& table, Issues& issues);
void read_journals(std::istream& in, std::string_view source, JournalImpact& table, Issues& issues);

/// Writes the canonical form of every table into `dir` using the same
/// file names load_tables expects.
void dump_tables(const OntologyTables& tables, const std::filesystem::path& dir);

}  // namespace pmr
