#include <gtest/gtest.h>

#include <cmath>

#include "pmr/ranker.hpp"

using namespace pmr;

namespace {

ScoredArticle candidate(std::string pmid, double s, double h, double y) {
  ScoredArticle c;
  c.pmid = std::move(pmid);
  c.score = s;
  c.impact = h;
  c.year = y;
  return c;
}

std::vector<std::string> order(const std::vector<ScoredArticle>& ranked) {
  std::vector<std::string> out;
  for (const auto& r : ranked) out.push_back(r.pmid);
  return out;
}

TEST(Sigmoid, AxisAndWorkedYear) {
  EXPECT_EQ(sigmoid_norm(2008, 2008, 1), 0.5);
  EXPECT_NEAR(sigmoid_norm(2006, 2008, 1), 1.0 / (1.0 + std::exp(2.0)), 1e-15);
  EXPECT_NEAR(sigmoid_norm(2006, 2008, 1), 0.11920292202211757, 1e-15);
  EXPECT_LT(sigmoid_norm(2007, 2008, 1), 0.5);
}

TEST(Sigmoid, LimitsStayInsideOpenInterval) {
  EXPECT_GT(sigmoid_norm(-1e308, 0, 1), 0.0);
  EXPECT_LT(sigmoid_norm(1e308, 0, 1), 1.0);
  EXPECT_NEAR(sigmoid_norm(1e3, 0, 1), 1.0, 1e-15);
  EXPECT_NEAR(sigmoid_norm(-1e3, 0, 1), 0.0, 1e-15);
  double prev = 0.0;
  for (double x = -50; x <= 50; x += 0.5) {
    const double v = sigmoid_norm(x, 0, 0.3);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Primary, FloorBuckets) {
  EXPECT_EQ(primary_score(45, 20), 2);
  EXPECT_EQ(primary_score(0, 20), 0);
  EXPECT_EQ(primary_score(39.99, 20), 1);
  EXPECT_EQ(primary_score(40.0, 20), 2);
  EXPECT_DOUBLE_EQ(score_remainder(45, 20), 5.0);
}

TEST(Secondary, AdditiveWorkedExample) {
  RankingParams p;
  EXPECT_DOUBLE_EQ(secondary_score(45, 200, 2008, p), 1.25);
}

TEST(Secondary, AsPrintedVariant) {
  RankingParams p;
  p.formula = SecondaryFormula::as_printed;
  EXPECT_DOUBLE_EQ(secondary_score(45, 200, 2008, p), 5.0 / 20.5 + 0.5);
}

TEST(Secondary, ZeroWeightsGiveZero) {
  RankingParams p;
  p.w_s = p.w_h = p.w_y = 0.0;
  for (auto f : {SecondaryFormula::additive, SecondaryFormula::as_printed}) {
    p.formula = f;
    EXPECT_EQ(secondary_score(57.3, 310, 1999, p), 0.0);
  }
}

TEST(Secondary, NewerYearScoresHigher) {
  RankingParams p;
  EXPECT_GT(secondary_score(30, 100, 2012, p), secondary_score(30, 100, 2004, p));
}

TEST(Rank, CloseScoresDecidedByImpactAndRecency) {
  auto ranked = rank({candidate("old", 59, 5, 1995), candidate("new", 41, 300, 2016)}, RankingParams{});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"new", "old"}));
  EXPECT_EQ(ranked[0].r1, 2);
  EXPECT_EQ(ranked[1].r1, 2);
  EXPECT_EQ(ranked[0].rank, 1u);
  EXPECT_EQ(ranked[1].rank, 2u);
}

TEST(Rank, BucketDominance) {
  auto ranked = rank({candidate("low", 59, 400, 2017), candidate("high", 61, 0, 0)}, RankingParams{});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"high", "low"}));
}

TEST(Rank, TiesFallBackToPmid) {
  auto ranked = rank({candidate("3", 10, 5, 2000), candidate("1", 10, 5, 2000), candidate("2", 10, 5, 2000)},
                     RankingParams{});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(Rank, WithoutRerankOrdersByScore) {
  auto ranked = rank({candidate("old", 59, 5, 1995), candidate("new", 41, 300, 2016)}, RankingParams{},
                     RankOptions{false});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"old", "new"}));
  EXPECT_EQ(ranked[0].r1, 2);  // still reported
}

TEST(Rank, DemotedCandidatesSortLast) {
  auto a = candidate("a", 100, 300, 2017);
  a.label = Label::irrelevant;
  auto b = candidate("b", 1, 0, 1990);
  b.label = Label::relevant;
  auto ranked = rank({a, b}, RankingParams{});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"b", "a"}));
}

TEST(Rank, MissingYearAndUnknownJournalAreWeakest) {
  auto ranked = rank({candidate("none", 10, 0, 0), candidate("some", 10, 1, 1990)}, RankingParams{});
  EXPECT_EQ(order(ranked), (std::vector<std::string>{"some", "none"}));
  EXPECT_LT(ranked[1].sigma_y, 1e-300);
}

TEST(Params, Validation) {
  RankingParams p;
  EXPECT_NO_THROW(p.validate());
  p.k = 0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.c_h = -1;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.w_y = -0.1;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(parse_formula("as_printed"), SecondaryFormula::as_printed);
  EXPECT_THROW(parse_formula("multiplicative"), Error);
}

}  // namespace
