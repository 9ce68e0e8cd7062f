#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metric_cases.hpp"
#include "pmr/evaluation.hpp"

using namespace pmr;
using pmr::testing::load_golden;
using pmr::testing::load_metric_cases;
using pmr::testing::metric_map;

namespace {

using Ranked = std::vector<std::string>;

TEST(Precision, Examples) {
  const TopicQrels q{{"a", 2}, {"b", 1}, {"c", 0}, {"d", 2}, {"e", 0}};
  EXPECT_DOUBLE_EQ(precision_at(Ranked{"a", "b", "c", "d", "e"}, q, 5), 0.6);
  EXPECT_DOUBLE_EQ(precision_at(Ranked{"a", "b", "d"}, q, 3), 1.0);
  EXPECT_DOUBLE_EQ(precision_at(Ranked{"a", "b"}, q, 5), 0.4);
  EXPECT_DOUBLE_EQ(precision_at(Ranked{"zz", "a"}, q, 2), 0.5);
}

TEST(RPrecision, Examples) {
  EXPECT_DOUBLE_EQ(r_precision(Ranked{"a", "b", "x"}, TopicQrels{{"a", 1}, {"b", 2}}), 1.0);
  const TopicQrels four{{"r1", 1}, {"r2", 2}, {"r3", 1}, {"r4", 2}, {"n", 0}};
  EXPECT_DOUBLE_EQ(r_precision(Ranked{"r1", "n", "x", "y", "r2"}, four), 0.25);
  EXPECT_DOUBLE_EQ(r_precision(Ranked{"a"}, TopicQrels{{"a", 0}}), 0.0);
}

TEST(Ndcg, Examples) {
  EXPECT_DOUBLE_EQ(ndcg(Ranked{"a"}, TopicQrels{{"a", 2}}), 1.0);
  const double expected = (2.0 / std::log2(3.0)) / 2.0;
  EXPECT_NEAR(ndcg(Ranked{"x", "a"}, TopicQrels{{"a", 2}}), expected, 1e-15);
  EXPECT_NEAR(ndcg(Ranked{"x", "a"}, TopicQrels{{"a", 2}}), 0.6309297535714575, 1e-12);
  EXPECT_EQ(ndcg(Ranked{}, TopicQrels{{"a", 2}}), 0.0);
  EXPECT_EQ(ndcg(Ranked{"a"}, TopicQrels{}), 0.0);
}

TEST(Evaluate, MeansOverQrelsTopics) {
  RunFile run;
  run.topics["1"] = {{"a", 1, 2, "t"}, {"b", 2, 1, "t"}, {"c", 3, 0, "t"}, {"d", 4, 0, "t"}, {"e", 5, 0, "t"}};
  run.topics["2"] = {{"p", 1, 5, "t"}, {"q", 2, 4, "t"}, {"r", 3, 3, "t"}, {"s", 4, 2, "t"}, {"u", 5, 1, "t"}};
  run.topics["99"] = {{"a", 1, 1, "t"}};
  Qrels qrels;
  qrels.topics["1"] = {{"a", 2}, {"b", 1}, {"d", 1}};
  qrels.topics["2"] = {{"p", 1}, {"q", 1}, {"r", 2}, {"s", 1}, {"u", 2}};
  const auto report = evaluate(run, qrels);
  EXPECT_DOUBLE_EQ(report.per_topic.at("1").p5, 0.6);
  EXPECT_DOUBLE_EQ(report.per_topic.at("2").p5, 1.0);
  EXPECT_DOUBLE_EQ(report.mean.p5, 0.8);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_NE(report.warnings[0].find("99"), std::string::npos);
  EXPECT_FALSE(report.per_topic.count("99"));
}

TEST(Evaluate, SingleTopicMeanEqualsTopic) {
  RunFile run;
  run.topics["5"] = {{"a", 1, 1, "t"}, {"x", 2, 0.5, "t"}};
  Qrels qrels;
  qrels.topics["5"] = {{"a", 1}, {"b", 2}};
  const auto report = evaluate(run, qrels);
  EXPECT_EQ(metric_map(report.mean), metric_map(report.per_topic.at("5")));
}

TEST(Evaluate, EmptyRunScoresZero) {
  Qrels qrels;
  qrels.topics["1"] = {{"a", 2}};
  const auto report = evaluate(RunFile{}, qrels);
  for (const auto& [name, v] : metric_map(report.mean)) EXPECT_EQ(v, 0.0) << name;
}

TEST(Evaluate, GoldenFixtures) {
  const auto golden = load_golden();
  const auto cases = load_metric_cases();
  ASSERT_GE(cases.size(), 10u);
  for (const auto& c : cases) {
    const auto report = evaluate(c.run, c.qrels);
    for (const auto& [topic, metrics] : report.per_topic) {
      const auto& expected = golden.at({c.name, topic});
      for (const auto& [name, value] : metric_map(metrics)) EXPECT_NEAR(value, expected.at(name), 1e-6) << c.name << ' ' << topic << ' ' << name;
    }
    const auto& mean = golden.at({c.name, "all"});
    for (const auto& [name, value] : metric_map(report.mean)) EXPECT_NEAR(value, mean.at(name), 1e-6) << c.name << " all " << name;
  }
}

TEST(Properties, RangeIdealAndCutoffInvariance) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    TopicQrels q;
    Ranked pool;
    for (int d = 0; d < 30; ++d) {
      pool.push_back("d" + std::to_string(d));
      if (rng() % 2) q[pool.back()] = static_cast<int>(rng() % 3);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    Ranked ranked(pool.begin(), pool.begin() + static_cast<long>(5 + rng() % 25));
    const auto m = evaluate_topic(ranked, q);
    for (double v : {m.p5, m.p10, m.r_prec, m.ndcg, m.ndcg10}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }

    // Permuting documents below the cutoff.
    if (ranked.size() > 10) {
      Ranked permuted = ranked;
      std::shuffle(permuted.begin() + 10, permuted.end(), rng);
      EXPECT_EQ(precision_at(permuted, q, 10), precision_at(ranked, q, 10));
      EXPECT_DOUBLE_EQ(ndcg(permuted, q, 10), ndcg(ranked, q, 10));
      EXPECT_EQ(precision_at(permuted, q, 5), precision_at(ranked, q, 5));
    }

    // Moving a higher-graded document up never lowers NDCG.
    for (std::size_t i = 1; i < ranked.size(); ++i) {
      auto g = [&](const std::string& d) { return q.count(d) ? q.at(d) : 0; };
      if (g(ranked[i]) > g(ranked[i - 1])) {
        Ranked swapped = ranked;
        std::swap(swapped[i], swapped[i - 1]);
        EXPECT_GE(ndcg(swapped, q) + 1e-12, ndcg(ranked, q));
        EXPECT_GE(ndcg(swapped, q, 10) + 1e-12, ndcg(ranked, q, 10));
      }
    }

    // Ideal ordering of all judged documents.
    Ranked ideal;
    for (const auto& [d, grade] : q) ideal.push_back(d);
    std::stable_sort(ideal.begin(), ideal.end(), [&](const auto& a, const auto& b) { return q.at(a) > q.at(b); });
    bool any_relevant = std::any_of(q.begin(), q.end(), [](const auto& kv) { return kv.second > 0; });
    if (any_relevant) {
      EXPECT_NEAR(ndcg(ideal, q), 1.0, 1e-12);
      EXPECT_NEAR(ndcg(ideal, q, 10), 1.0, 1e-12);
    }
  }
}

TEST(Files, QrelsParsing) {
  std::istringstream in("1 0 a 2\n1 0 b 1\nbad line\n1 0 c 7\n1 0 a 0\n\n2 0 x 0\n");
  const auto parsed = read_qrels(in, "q.txt");
  EXPECT_EQ(parsed.qrels.topics.at("1").size(), 2u);
  EXPECT_EQ(parsed.qrels.topics.at("1").at("a"), 2);
  ASSERT_EQ(parsed.issues.size(), 3u);
  EXPECT_EQ(parsed.issues[0].line, 3u);
  EXPECT_EQ(parsed.issues[1].line, 4u);
  EXPECT_EQ(parsed.issues[2].line, 5u);
}

TEST(Files, RunParsingOrdersAndDeduplicates) {
  std::istringstream in("1 Q0 b 2 0.5 t\n1 Q0 a 1 0.9 t\n1 Q0 a 3 0.1 t\n1 Q0 c 5 0.0 t\nbroken\n");
  const auto parsed = read_run(in);
  const auto& entries = parsed.run.topics.at("1");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0].pmid, "a");
  EXPECT_EQ(entries[1].pmid, "b");
  EXPECT_EQ(entries[2].pmid, "c");
  EXPECT_EQ(entries[2].rank, 3);
  EXPECT_EQ(parsed.issues.size(), 3u);
}

TEST(Files, RunRoundTripAndTopicOrder) {
  RunFile run;
  run.topics["10"] = {{"x", 1, 2.0, "tag"}};
  run.topics["9"] = {{"y", 1, 1.5, "tag"}, {"z", 2, 0.25, "tag"}};
  std::ostringstream out;
  write_run(out, run);
  EXPECT_EQ(out.str(), "9 Q0 y 1 1.500000 tag\n9 Q0 z 2 0.250000 tag\n10 Q0 x 1 2.000000 tag\n");
  std::istringstream back(out.str());
  const auto parsed = read_run(back);
  EXPECT_TRUE(parsed.issues.empty());
  EXPECT_EQ(parsed.run.topics.at("9")[1].pmid, "z");
}

TEST(Report, FormatsListAllFiveMetricsAndInfNdcgNa) {
  RunFile run;
  run.topics["1"] = {{"a", 1, 1, "t"}};
  Qrels qrels;
  qrels.topics["1"] = {{"a", 2}};
  const auto report = evaluate(run, qrels);
  const std::string text = report.to_text();
  EXPECT_NE(text.find("NDCG@10"), std::string::npos);
  EXPECT_NE(text.find("n/a"), std::string::npos);
  const std::string records = report.to_records();
  for (const char* m : {"P_5\tall", "P_10\tall", "Rprec\tall", "ndcg\tall", "ndcg_cut_10\tall", "infNDCG\tall\tn/a"})
    EXPECT_NE(records.find(m), std::string::npos) << m;
  const auto json = report.to_json();
  EXPECT_DOUBLE_EQ(json["mean"]["ndcg"].get<double>(), 1.0);
  EXPECT_TRUE(json["mean"]["infNDCG"].is_null());
}

}  // namespace
