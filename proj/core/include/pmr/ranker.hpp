#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "pmr/corpus_index.hpp"
#include "pmr/ontology.hpp"
#include "pmr/query.hpp"

namespace pmr {

enum class SecondaryFormula {
  additive,    // w_s (s mod k)/k + w_h sig(h) + w_y sig(y)
  as_printed,  // w_s (s mod k) / (k + w_h sig(h)) + w_y sig(y)
};

std::string_view formula_name(SecondaryFormula formula);
SecondaryFormula parse_formula(std::string_view name);

struct RankingParams {
  double k = 20.0;
  double w_s = 1.0;
  double w_h = 1.0;
  double w_y = 1.0;
  double h_axis = 200.0;
  double y_axis = 2008.0;
  double c_h = 0.05;
  double c_y = 1.0;
  SecondaryFormula formula = SecondaryFormula::additive;

  /// Throws pmr::Error unless k, c_h, c_y > 0 and weights are >= 0.
  void validate() const;
  bool operator==(const RankingParams&) const = default;
};

/// 1 / (1 + exp(-c (x - axis))), kept strictly inside (0, 1).
double sigmoid_norm(double x, double axis, double c);

/// floor(s / k)
long long primary_score(double s, double k);

/// s - k floor(s / k)
double score_remainder(double s, double k);

double secondary_score(double s, double h, double y, const RankingParams& params);

enum class IrrelevantPolicy { filter, demote };

struct RankOptions {
  /// false: order by s alone (r1/r2 are still reported).
  bool rerank = true;
};

/// Sorts by (demoted last, r1 desc, r2 desc, s desc, pmid asc) using each
/// candidate's `impact` and `year`, fills r1/r2/sigma and assigns ranks
/// 1..n. Candidates labeled irrelevant are demoted below all others; drop
/// them beforehand to filter instead.
std::vector<ScoredArticle> rank(std::vector<ScoredArticle> candidates, const RankingParams& params,
                                const RankOptions& options = {});

/// Looks up journal impact and year from the index, then ranks.
std::vector<ScoredArticle> rank(std::vector<ScoredArticle> candidates, const Index& index,
                                const JournalImpact& impacts, const RankingParams& params,
                                const RankOptions& options = {});

}  // namespace pmr
