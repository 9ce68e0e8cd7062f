#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmr/corpus_index.hpp"
#include "pmr/profile.hpp"

namespace pmr {

/// Exact token sequence in one field. A single token is a term matcher;
/// longer sequences require positional adjacency.
struct Matcher {
  Field field = Field::title;
  std::vector<std::string> tokens;
  std::string term;  // surface term the matcher came from

  bool operator==(const Matcher&) const = default;
};

/// Disjunction of matchers.
struct Clause {
  std::string label;
  std::vector<Matcher> matchers;
  double boost = 1.0;
};

struct Query {
  std::vector<Clause> must;
  std::vector<Clause> must_not;
  std::vector<Clause> should;

  /// Lucene-flavoured rendering used by `search --explain`, e.g.
  /// +disease:(title:"lung adenocarcinoma" ...) variants:(abstract:g12c)^2
  std::string to_string() const;
};

/// Adds one matcher per field for every distinct tokenization of `terms`.
Clause make_clause(std::string label, const TermSet& terms, double boost = 1.0);

struct QueryOptions {
  double should_boost = 1.0;
  double variant_boost = 2.0;
  /// Off by default: age is never a hard filter, these only add
  /// pediatric / geriatric optional clauses.
  bool age_should = false;
};

const TermSet& pediatric_keywords();
const TermSet& geriatric_keywords();

/// must: disease synonyms, one clause per gene, each specified variant,
/// drugs or treatment keywords. should: candidate variants of genes
/// without a specified variant, each "other" condition as a phrase.
Query formulate_query(const ExpandedProfile& profile, const QueryOptions& options = {});

enum class Label { relevant, irrelevant };

std::string_view label_name(Label label);

struct ScoredArticle {
  DocId doc = 0;
  std::string pmid;
  /// Adjusted relevance score s.
  double score = 0.0;
  std::size_t matched_should = 0;
  double coord = 0.0;
  /// Boosted per-clause contribution before coord; must clauses first,
  /// then should clauses, in query order. Zero for unmatched clauses.
  std::vector<double> clause_scores;
  /// Surface terms of every matched matcher, deduplicated.
  std::vector<std::string> matched_terms;

  std::optional<Label> label;

  double impact = 0.0;
  double year = 0.0;
  long long r1 = 0;
  double r2 = 0.0;
  double sigma_h = 0.0;
  double sigma_y = 0.0;
  std::size_t rank = 0;  // 1-based once ranked
};

/// Boolean retrieval. Returns every document matching all must clauses
/// and no must_not clause, in DocId order, with
///   s = coord * sum over matched clauses of boost * sum of matched
///       matcher scores,
///   coord = matched (must + should) / total (must + should).
/// A term matcher scores term_score; a phrase matcher scores the sum of
/// its tokens' term_score when the phrase occurs.
std::vector<ScoredArticle> execute(const Query& query, const Index& index);

const TermSet& male_keywords();
const TermSet& female_keywords();

/// Non-contradiction with the profile's gender: an article mentioning only
/// the opposite gender's keywords (title + abstract) is incompatible.
bool demographic_compatible(const Article& article, std::optional<Gender> gender);
bool demographic_compatible(const Article& article, const PatientProfile& profile);

}  // namespace pmr
