#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "pmr/ontology.hpp"
#include "test_support.hpp"

using namespace pmr;
using pmr::testing::fixture_path;
using pmr::testing::read_file;
using pmr::testing::TempDir;
using pmr::testing::write_file;

namespace {

OntologyTables fixture_tables() {
  auto loaded = load_tables(OntologyPaths::in_directory(fixture_path("synthetic/ontology")));
  EXPECT_TRUE(loaded.issues.empty());
  return std::move(loaded.tables);
}

TEST(SynonymTable, SharedConceptFromFile) {
  SynonymTable table;
  Issues issues;
  std::istringstream in("D001\tlung adenocarcinoma\nD001\tadenocarcinoma of lung\n");
  read_synonyms(in, "diseases.tsv", table, issues);
  EXPECT_TRUE(issues.empty());
  EXPECT_EQ(table.concept_of("lung adenocarcinoma"), "D001");
  EXPECT_EQ(table.concept_of("adenocarcinoma of lung"), "D001");
}

TEST(SynonymTable, GeneAliases) {
  SynonymTable table;
  Issues issues;
  std::istringstream in("G0042\tCDK4\nG0042\tPSK-J3\nG0042\tCMM3\n");
  read_synonyms(in, "genes.tsv", table, issues);
  EXPECT_EQ(table.synonyms("cdk4"), (TermSet{"cdk4", "psk-j3", "cmm3"}));
  EXPECT_EQ(table.synonyms("Cdk4"), table.synonyms("CDK4"));
}

TEST(SynonymTable, UnknownTermIsItsOwnSynonym) {
  SynonymTable table;
  EXPECT_EQ(table.synonyms("zzz"), TermSet{"zzz"});
  EXPECT_EQ(table.synonyms(" ZZZ "), TermSet{"zzz"});
  EXPECT_FALSE(table.concept_of("zzz").has_value());
}

TEST(SynonymTable, TermKeepsItsFirstConcept) {
  SynonymTable table;
  Issues issues;
  std::istringstream in("A\tshared\nB\tShared\nB\tother\n");
  read_synonyms(in, "genes.tsv", table, issues);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].line, 2u);
  EXPECT_EQ(table.concept_of("shared"), "A");
  EXPECT_EQ(table.terms_of("B"), TermSet{"other"});
}

TEST(OntologyFiles, MalformedLinesAreSkippedWithWarnings) {
  SynonymTable table;
  Issues issues;
  std::istringstream in("# comment\n\nD1\tok\nno tab here\nD1\ttoo\tmany\n\tmissing id\nD2\tfine\r\n");
  read_synonyms(in, "diseases.tsv", table, issues);
  EXPECT_EQ(table.term_count(), 2u);
  ASSERT_EQ(issues.size(), 3u);
  EXPECT_EQ(issues[0].line, 4u);
  EXPECT_EQ(issues[1].line, 5u);
  EXPECT_EQ(issues[2].line, 6u);

  JournalImpact journals;
  Issues journal_issues;
  std::istringstream jin("nature\t10\nnature\t11\nscience\t-1\ncell\tmany\n");
  read_journals(jin, "journals.tsv", journals, journal_issues);
  EXPECT_EQ(journals.size(), 1u);
  EXPECT_EQ(journals.impact_of("nature"), 10);
  EXPECT_EQ(journal_issues.size(), 3u);
}

TEST(OntologyFiles, MissingFileIsFatalAndNamed) {
  TempDir dir;
  for (const char* name : {"diseases.tsv", "genes.tsv", "variants.tsv", "drugs.tsv"}) write_file(dir / name, "");
  try {
    load_tables(OntologyPaths::in_directory(dir.path()));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("journals.tsv"), std::string::npos);
  }
}

TEST(OntologyFiles, EmptyVariantFileGivesNoGenes) {
  TempDir dir;
  for (const char* name : {"diseases.tsv", "genes.tsv", "variants.tsv", "drugs.tsv", "journals.tsv"})
    write_file(dir / name, "");
  auto loaded = load_tables(OntologyPaths::in_directory(dir.path()));
  EXPECT_EQ(loaded.tables.variants.key_count(), 0u);
  EXPECT_TRUE(loaded.issues.empty());
}

// Reads `concept<TAB>value` rows straight from a fixture file.
std::map<std::string, std::set<std::string>> raw_rows(const std::string& file) {
  std::map<std::string, std::set<std::string>> rows;
  std::ifstream in(fixture_path("synthetic/ontology/" + file));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    std::string value = line.substr(tab + 1);
    std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
    rows[line.substr(0, tab)].insert(value);
  }
  return rows;
}

TEST(VariantTable, FixtureReadBack) {
  const auto tables = fixture_tables();
  const auto rows = raw_rows("variants.tsv");
  const auto& expected = rows.at("G0042");
  EXPECT_EQ(expected.size(), 3u);
  const auto& variants = tables.variants.variants_of("G0042");
  EXPECT_EQ(std::set<std::string>(variants.begin(), variants.end()), expected);
  EXPECT_TRUE(tables.variants.variants_of("G9999").empty());
}

TEST(VariantTable, DuplicateLinesCollapse) {
  VariantTable table;
  Issues issues;
  std::istringstream in("G1\tV600E\nG1\tv600e\nG1\tV600K\n");
  read_associations(in, "variants.tsv", table, issues);
  EXPECT_EQ(table.variants_of("G1"), (TermSet{"v600e", "v600k"}));
}

TEST(JournalImpact, FixtureLookupIsCaseInsensitive) {
  const auto tables = fixture_tables();
  EXPECT_EQ(tables.journals.impact_of("nature medicine"), 90);
  EXPECT_EQ(tables.journals.impact_of("Nature Medicine"), 90);
  EXPECT_EQ(tables.journals.impact_of("Unknown Journal"), 0);
}

TEST(DrugAssociations, FixtureReadBack) {
  const auto tables = fixture_tables();
  EXPECT_EQ(tables.drugs.drugs_of("G0300"), (TermSet{"erlotinib", "gefitinib", "osimertinib"}));
  EXPECT_TRUE(tables.drugs.drugs_of("D003").empty());
}

TEST(SynonymTable, ClosureAndIdempotence) {
  const auto tables = fixture_tables();
  for (const auto* table : {&tables.diseases, &tables.genes}) {
    std::ostringstream dump;
    table->dump(dump);
    std::istringstream lines(dump.str());
    std::string line;
    while (std::getline(lines, line)) {
      const std::string term = line.substr(line.find('\t') + 1);
      const TermSet set = table->synonyms(term);
      EXPECT_TRUE(set.count(term));
      TermSet expanded;
      for (const auto& s : set) {
        EXPECT_EQ(table->synonyms(s), set) << s;
        const auto again = table->synonyms(s);
        expanded.insert(again.begin(), again.end());
      }
      EXPECT_EQ(expanded, set);
    }
  }
}

// Canonical form of a fixture file: comments dropped, values folded,
// rows deduplicated and sorted by (key, value).
std::string canonical(const std::string& file) {
  std::ostringstream out;
  for (const auto& [key, values] : raw_rows(file))
    for (const auto& v : values) out << key << '\t' << v << '\n';
  return out.str();
}

TEST(OntologyFiles, LoadThenDumpReproducesCanonicalContent) {
  const auto tables = fixture_tables();
  TempDir dir;
  dump_tables(tables, dir.path());
  for (const char* name : {"diseases.tsv", "genes.tsv", "variants.tsv", "drugs.tsv", "journals.tsv"})
    EXPECT_EQ(read_file(dir / name), canonical(name)) << name;

  auto reloaded = load_tables(OntologyPaths::in_directory(dir.path()));
  TempDir again;
  dump_tables(reloaded.tables, again.path());
  for (const char* name : {"diseases.tsv", "genes.tsv", "variants.tsv", "drugs.tsv", "journals.tsv"})
    EXPECT_EQ(read_file(again / name), read_file(dir / name));
}

}  // namespace
