#include "pmr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pmr {

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string f; in >> f;) out.push_back(std::move(f));
  return out;
}

bool parse_int(const std::string& s, int& value) {
  try {
    std::size_t used = 0;
    value = std::stoi(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_double(const std::string& s, double& value) {
  try {
    std::size_t used = 0;
    value = std::stod(s, &used);
    return used == s.size() && std::isfinite(value);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

QrelsParseResult read_qrels(std::istream& in, std::string_view source) {
  QrelsParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = fields_of(line);
    if (f.empty()) continue;
    int grade = 0;
    if (f.size() != 4) {
      result.issues.push_back({std::string(source), line_no, "expected 4 columns: topic 0 pmid grade"});
      continue;
    }
    if (!parse_int(f[3], grade) || grade < 0 || grade > 2) {
      result.issues.push_back({std::string(source), line_no, "grade must be 0, 1 or 2"});
      continue;
    }
    auto& topic = result.qrels.topics[f[0]];
    if (!topic.emplace(f[2], grade).second)
      result.issues.push_back({std::string(source), line_no, "repeated judgment for " + f[0] + "/" + f[2]});
  }
  return result;
}

RunParseResult read_run(std::istream& in, std::string_view source) {
  RunParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = fields_of(line);
    if (f.empty()) continue;
    RunEntry e;
    if (f.size() != 6 || !parse_int(f[3], e.rank) || !parse_double(f[4], e.score)) {
      result.issues.push_back({std::string(source), line_no, "expected: topic Q0 pmid rank score tag"});
      continue;
    }
    e.pmid = f[2];
    e.tag = f[5];
    result.run.topics[f[0]].push_back(std::move(e));
  }
  for (auto& [topic, entries] : result.run.topics) {
    std::stable_sort(entries.begin(), entries.end(), [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    std::set<std::string> seen;
    std::vector<RunEntry> unique;
    for (auto& e : entries) {
      if (!seen.insert(e.pmid).second) {
        result.issues.push_back({std::string(source), 0, "topic " + topic + ": duplicate pmid " + e.pmid + " dropped"});
        continue;
      }
      unique.push_back(std::move(e));
    }
    bool contiguous = true;
    for (std::size_t i = 0; i < unique.size(); ++i) contiguous = contiguous && unique[i].rank == static_cast<int>(i + 1);
    if (!contiguous) {
      result.issues.push_back({std::string(source), 0, "topic " + topic + ": ranks renumbered to 1..n"});
      for (std::size_t i = 0; i < unique.size(); ++i) unique[i].rank = static_cast<int>(i + 1);
    }
    entries = std::move(unique);
  }
  return result;
}

void write_run(std::ostream& out, const RunFile& run) {
  char score[64];
  for (const auto& [topic, entries] : run.topics) {
    for (const auto& e : entries) {
      std::snprintf(score, sizeof score, "%.6f", e.score);
      out << topic << " Q0 " << e.pmid << ' ' << e.rank << ' ' << score << ' ' << e.tag << '\n';
    }
  }
}

void write_qrels(std::ostream& out, const Qrels& qrels) {
  for (const auto& [topic, judged] : qrels.topics)
    for (const auto& [pmid, grade] : judged) out << topic << " 0 " << pmid << ' ' << grade << '\n';
}

namespace {

int grade_of(const TopicQrels& qrels, const std::string& pmid) {
  auto it = qrels.find(pmid);
  return it == qrels.end() ? 0 : it->second;
}

}  // namespace

double precision_at(std::span<const std::string> ranked, const TopicQrels& qrels, std::size_t cutoff) {
  if (cutoff == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(cutoff, ranked.size()); ++i) hits += grade_of(qrels, ranked[i]) >= 1;
  return static_cast<double>(hits) / static_cast<double>(cutoff);
}

double r_precision(std::span<const std::string> ranked, const TopicQrels& qrels) {
  const auto r = static_cast<std::size_t>(
      std::count_if(qrels.begin(), qrels.end(), [](const auto& kv) { return kv.second >= 1; }));
  return r == 0 ? 0.0 : precision_at(ranked, qrels, r);
}

double ndcg(std::span<const std::string> ranked, const TopicQrels& qrels, std::optional<std::size_t> cutoff) {
  const std::size_t depth = cutoff ? std::min(*cutoff, ranked.size()) : ranked.size();
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    const int g = grade_of(qrels, ranked[i]);
    if (g > 0) dcg += g / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> ideal;
  for (const auto& [_, g] : qrels)
    if (g > 0) ideal.push_back(g);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const std::size_t ideal_depth = cutoff ? std::min(*cutoff, ideal.size()) : ideal.size();
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal_depth; ++i) idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

TopicMetrics evaluate_topic(std::span<const std::string> ranked, const TopicQrels& qrels) {
  return {precision_at(ranked, qrels, 5), precision_at(ranked, qrels, 10), r_precision(ranked, qrels),
          ndcg(ranked, qrels), ndcg(ranked, qrels, 10)};
}

EvaluationReport evaluate(const RunFile& run, const Qrels& qrels) {
  EvaluationReport report;
  for (const auto& [topic, _] : run.topics)
    if (!qrels.topics.count(topic)) report.warnings.push_back("topic " + topic + " has no judgments; skipped");

  for (const auto& [topic, judged] : qrels.topics) {
    std::vector<std::string> ranked;
    if (auto it = run.topics.find(topic); it != run.topics.end())
      for (const auto& e : it->second) ranked.push_back(e.pmid);
    report.per_topic[topic] = evaluate_topic(ranked, judged);
  }
  if (!report.per_topic.empty()) {
    const double n = static_cast<double>(report.per_topic.size());
    for (const auto& [_, m] : report.per_topic) {
      report.mean.p5 += m.p5;
      report.mean.p10 += m.p10;
      report.mean.r_prec += m.r_prec;
      report.mean.ndcg += m.ndcg;
      report.mean.ndcg10 += m.ndcg10;
    }
    report.mean.p5 /= n;
    report.mean.p10 /= n;
    report.mean.r_prec /= n;
    report.mean.ndcg /= n;
    report.mean.ndcg10 /= n;
  }
  return report;
}

namespace {

constexpr const char* kMetricNames[] = {"P_5", "P_10", "Rprec", "ndcg", "ndcg_cut_10"};

std::array<double, 5> values(const TopicMetrics& m) { return {m.p5, m.p10, m.r_prec, m.ndcg, m.ndcg10}; }

}  // namespace

std::string EvaluationReport::to_text() const {
  std::string topic_header = "topic";
  std::size_t width = topic_header.size();
  for (const auto& [t, _] : per_topic) width = std::max(width, t.size());
  width = std::max<std::size_t>(width, 3) + 2;

  std::ostringstream out;
  char cell[32];
  auto row = [&](const std::string& label, const TopicMetrics& m) {
    out << label << std::string(width - label.size(), ' ');
    for (double v : values(m)) {
      std::snprintf(cell, sizeof cell, "%-9.4f", v);
      out << cell;
    }
    out << "n/a\n";
  };
  out << topic_header << std::string(width - topic_header.size(), ' ')
      << "P5       P10      R-prec   NDCG     NDCG@10  infNDCG\n";
  for (const auto& [t, m] : per_topic) row(t, m);
  row("all", mean);
  return out.str();
}

std::string EvaluationReport::to_records() const {
  std::ostringstream out;
  char value[32];
  auto emit = [&](const std::string& topic, const TopicMetrics& m) {
    auto v = values(m);
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(value, sizeof value, "%.4f", v[i]);
      out << kMetricNames[i] << '\t' << topic << '\t' << value << '\n';
    }
    out << "infNDCG\t" << topic << "\tn/a\n";
  };
  for (const auto& [t, m] : per_topic) emit(t, m);
  emit("all", mean);
  return out.str();
}

nlohmann::json EvaluationReport::to_json() const {
  auto object = [](const TopicMetrics& m) {
    nlohmann::json j;
    auto v = values(m);
    for (std::size_t i = 0; i < v.size(); ++i) j[kMetricNames[i]] = v[i];
    j["infNDCG"] = nullptr;
    return j;
  };
  nlohmann::json topics = nlohmann::json::object();
  for (const auto& [t, m] : per_topic) topics[t] = object(m);
  return {{"topics", topics}, {"mean", object(mean)}, {"topic_count", per_topic.size()}, {"warnings", warnings}};
}

}  // namespace pmr
