#include "pmr/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmr {

std::string_view formula_name(SecondaryFormula formula) {
  return formula == SecondaryFormula::additive ? "additive" : "as_printed";
}

SecondaryFormula parse_formula(std::string_view name) {
  if (name == "additive") return SecondaryFormula::additive;
  if (name == "as_printed" || name == "as-printed") return SecondaryFormula::as_printed;
  throw Error("unknown secondary formula '" + std::string(name) + "' (expected additive or as_printed)");
}

void RankingParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto non_negative = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!positive(k)) throw Error("ranking parameter k must be > 0");
  if (!positive(c_h) || !positive(c_y)) throw Error("sigmoid scales c_h and c_y must be > 0");
  if (!non_negative(w_s) || !non_negative(w_h) || !non_negative(w_y)) throw Error("ranking weights must be >= 0");
  if (!std::isfinite(h_axis) || !std::isfinite(y_axis)) throw Error("symmetry axes must be finite");
}

double sigmoid_norm(double x, double axis, double c) {
  static constexpr double kLow = std::numeric_limits<double>::denorm_min();
  static const double kHigh = std::nextafter(1.0, 0.0);
  const double v = 1.0 / (1.0 + std::exp(-c * (x - axis)));
  return std::clamp(v, kLow, kHigh);
}

long long primary_score(double s, double k) { return static_cast<long long>(std::floor(s / k)); }

double score_remainder(double s, double k) { return s - k * std::floor(s / k); }

double secondary_score(double s, double h, double y, const RankingParams& p) {
  const double rem = score_remainder(s, p.k);
  const double sh = sigmoid_norm(h, p.h_axis, p.c_h);
  const double sy = sigmoid_norm(y, p.y_axis, p.c_y);
  if (p.formula == SecondaryFormula::as_printed) return p.w_s * rem / (p.k + p.w_h * sh) + p.w_y * sy;
  return p.w_s * (rem / p.k) + p.w_h * sh + p.w_y * sy;
}

std::vector<ScoredArticle> rank(std::vector<ScoredArticle> candidates, const RankingParams& params,
                                const RankOptions& options) {
  params.validate();
  for (auto& c : candidates) {
    c.r1 = primary_score(c.score, params.k);
    c.sigma_h = sigmoid_norm(c.impact, params.h_axis, params.c_h);
    c.sigma_y = sigmoid_norm(c.year, params.y_axis, params.c_y);
    c.r2 = secondary_score(c.score, c.impact, c.year, params);
  }
  auto demoted = [](const ScoredArticle& a) { return a.label == Label::irrelevant; };
  auto by_key = [&](const ScoredArticle& a, const ScoredArticle& b) {
    if (demoted(a) != demoted(b)) return demoted(b);
    if (options.rerank) {
      if (a.r1 != b.r1) return a.r1 > b.r1;
      if (a.r2 != b.r2) return a.r2 > b.r2;
    }
    if (a.score != b.score) return a.score > b.score;
    return a.pmid < b.pmid;
  };
  std::sort(candidates.begin(), candidates.end(), by_key);
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].rank = i + 1;
  return candidates;
}

std::vector<ScoredArticle> rank(std::vector<ScoredArticle> candidates, const Index& index,
                                const JournalImpact& impacts, const RankingParams& params,
                                const RankOptions& options) {
  for (auto& c : candidates) {
    const Article& a = index.article(c.doc);
    c.impact = impacts.impact_of(a.journal);
    c.year = a.year;
  }
  return rank(std::move(candidates), params, options);
}

}  // namespace pmr
