#include "pmr/ontology.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "pmr/tokenizer.hpp"

namespace pmr {

namespace {

const TermSet kEmpty;

}  // namespace

bool SynonymTable::add(std::string_view concept_id, std::string_view term) {
  const std::string id(trim(concept_id));
  std::string folded = fold_case(term);
  if (id.empty() || folded.empty()) return false;
  auto it = by_term_.find(folded);
  if (it != by_term_.end()) return it->second == id;
  by_term_.emplace(folded, id);
  by_concept_[id].insert(std::move(folded));
  return true;
}

std::optional<std::string> SynonymTable::concept_of(std::string_view term) const {
  auto it = by_term_.find(fold_case(term));
  if (it == by_term_.end()) return std::nullopt;
  return it->second;
}

const TermSet& SynonymTable::terms_of(std::string_view concept_id) const {
  auto it = by_concept_.find(concept_id);
  return it == by_concept_.end() ? kEmpty : it->second;
}

TermSet SynonymTable::synonyms(std::string_view term) const {
  std::string folded = fold_case(term);
  auto it = by_term_.find(folded);
  if (it == by_term_.end()) return TermSet{std::move(folded)};
  return terms_of(it->second);
}

void SynonymTable::dump(std::ostream& out) const {
  for (const auto& [id, terms] : by_concept_)
    for (const auto& t : terms) out << id << '\t' << t << '\n';
}

bool AssociationTable::add(std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  std::string v = fold_case(value);
  if (k.empty() || v.empty()) return false;
  entries_[k].insert(std::move(v));
  return true;
}

const TermSet& AssociationTable::values_of(std::string_view key) const {
  auto it = entries_.find(trim(key));
  return it == entries_.end() ? kEmpty : it->second;
}

void AssociationTable::dump(std::ostream& out) const {
  for (const auto& [key, values] : entries_)
    for (const auto& v : values) out << key << '\t' << v << '\n';
}

bool JournalImpact::add(std::string_view journal, int h5) {
  std::string folded = fold_case(journal);
  if (folded.empty() || h5 < 0) return false;
  return entries_.emplace(std::move(folded), h5).second;
}

int JournalImpact::impact_of(std::string_view journal) const {
  auto it = entries_.find(fold_case(journal));
  return it == entries_.end() ? 0 : it->second;
}

void JournalImpact::dump(std::ostream& out) const {
  for (const auto& [journal, h5] : entries_) out << journal << '\t' << h5 << '\n';
}

OntologyPaths OntologyPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "diseases.tsv", dir / "genes.tsv", dir / "variants.tsv", dir / "drugs.tsv", dir / "journals.tsv"};
}

namespace {

// Calls `row(line_no, first, second)` for each non-blank, non-comment
// line with exactly two tab-separated columns; reports the rest.
template <typename Row>
void for_each_row(std::istream& in, std::string_view source, Issues& issues, Row row) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      issues.push_back({std::string(source), line_no, "expected exactly two tab-separated columns"});
      continue;
    }
    std::string_view view(line);
    auto first = trim(view.substr(0, tab));
    auto second = trim(view.substr(tab + 1));
    if (first.empty() || second.empty()) {
      issues.push_back({std::string(source), line_no, "empty column"});
      continue;
    }
    row(line_no, first, second);
  }
}

std::ifstream open_required(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + std::string(what) + " file " + path.string());
  return in;
}

}  // namespace

void read_synonyms(std::istream& in, std::string_view source, SynonymTable& table, Issues& issues) {
  for_each_row(in, source, issues, [&](std::size_t line_no, std::string_view id, std::string_view term) {
    if (!table.add(id, term)) {
      issues.push_back({std::string(source), line_no,
                        "term '" + fold_case(term) + "' already belongs to concept " + table.concept_of(term).value_or("?")});
    }
  });
}

void read_associations(std::istream& in, std::string_view source, AssociationTable& table, Issues& issues) {
  for_each_row(in, source, issues, [&](std::size_t, std::string_view key, std::string_view value) { table.add(key, value); });
}

void read_journals(std::istream& in, std::string_view source, JournalImpact& table, Issues& issues) {
  for_each_row(in, source, issues, [&](std::size_t line_no, std::string_view journal, std::string_view h5) {
    int value = -1;
    auto [ptr, ec] = std::from_chars(h5.data(), h5.data() + h5.size(), value);
    if (ec != std::errc{} || ptr != h5.data() + h5.size() || value < 0) {
      issues.push_back({std::string(source), line_no, "H5 index must be a non-negative integer"});
      return;
    }
    if (!table.add(journal, value))
      issues.push_back({std::string(source), line_no, "duplicate journal '" + fold_case(journal) + "'"});
  });
}

LoadedTables load_tables(const OntologyPaths& paths) {
  // Open everything first so a missing file fails before any parsing.
  auto diseases = open_required(paths.diseases, "disease");
  auto genes = open_required(paths.genes, "gene");
  auto variants = open_required(paths.variants, "variant");
  auto drugs = open_required(paths.drugs, "drug");
  auto journals = open_required(paths.journals, "journal");

  LoadedTables loaded;
  read_synonyms(diseases, paths.diseases.string(), loaded.tables.diseases, loaded.issues);
  read_synonyms(genes, paths.genes.string(), loaded.tables.genes, loaded.issues);
  read_associations(variants, paths.variants.string(), loaded.tables.variants, loaded.issues);
  read_associations(drugs, paths.drugs.string(), loaded.tables.drugs, loaded.issues);
  read_journals(journals, paths.journals.string(), loaded.tables.journals, loaded.issues);
  return loaded;
}

void dump_tables(const OntologyTables& tables, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto paths = OntologyPaths::in_directory(dir);
  auto write = [](const std::filesystem::path& p, auto&& body) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    body(out);
  };
  write(paths.diseases, [&](std::ostream& o) { tables.diseases.dump(o); });
  write(paths.genes, [&](std::ostream& o) { tables.genes.dump(o); });
  write(paths.variants, [&](std::ostream& o) { tables.variants.dump(o); });
  write(paths.drugs, [&](std::ostream& o) { tables.drugs.dump(o); });
  write(paths.journals, [&](std::ostream& o) { tables.journals.dump(o); });
}

}  // namespace pmr
