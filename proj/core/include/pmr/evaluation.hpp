#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pmr/common.hpp"

namespace pmr {

/// pmid -> grade (0 irrelevant, 1 partially relevant, 2 relevant).
using TopicQrels = std::map<std::string, int, std::less<>>;

struct Qrels {
  std::map<std::string, TopicQrels, TopicLess> topics;
};

struct RunEntry {
  std::string pmid;
  int rank = 0;
  double score = 0.0;
  std::string tag;
};

/// topic -> entries ordered by rank (1..n, pmids unique).
struct RunFile {
  std::map<std::string, std::vector<RunEntry>, TopicLess> topics;
};

struct QrelsParseResult {
  Qrels qrels;
  Issues issues;
};

struct RunParseResult {
  RunFile run;
  Issues issues;
};

/// `topic 0 pmid grade` lines; bad lines and grades outside 0..2 are
/// skipped with an issue. A repeated (topic, pmid) keeps the first grade.
QrelsParseResult read_qrels(std::istream& in, std::string_view source = "qrels");

/// `topic Q0 pmid rank score tag` lines. Entries are ordered by rank;
/// duplicate pmids within a topic are dropped, and ranks are renumbered
/// 1..n when they are not contiguous.
RunParseResult read_run(std::istream& in, std::string_view source = "run");

void write_run(std::ostream& out, const RunFile& run);
void write_qrels(std::ostream& out, const Qrels& qrels);

// Ranked pmids against one topic's judgments. Missing judgments count as
// grade 0, and "relevant" means grade >= 1.
double precision_at(std::span<const std::string> ranked, const TopicQrels& qrels, std::size_t cutoff);
double r_precision(std::span<const std::string> ranked, const TopicQrels& qrels);
/// Linear gain, log2(rank + 1) discount. Full depth when cutoff is empty.
double ndcg(std::span<const std::string> ranked, const TopicQrels& qrels,
            std::optional<std::size_t> cutoff = std::nullopt);

struct TopicMetrics {
  double p5 = 0.0;
  double p10 = 0.0;
  double r_prec = 0.0;
  double ndcg = 0.0;
  double ndcg10 = 0.0;
};

TopicMetrics evaluate_topic(std::span<const std::string> ranked, const TopicQrels& qrels);

struct EvaluationReport {
  std::map<std::string, TopicMetrics, TopicLess> per_topic;
  TopicMetrics mean;
  std::vector<std::string> warnings;

  /// Aligned table, one row per topic plus "all"; infNDCG shows n/a.
  std::string to_text() const;
  /// trec_eval style `metric<TAB>topic<TAB>value` records.
  std::string to_records() const;
  nlohmann::json to_json() const;
};

/// Per-topic metrics for every topic in the qrels (a topic absent from the
/// run scores 0) and their arithmetic mean. Run topics absent from the
/// qrels are skipped with a warning.
EvaluationReport evaluate(const RunFile& run, const Qrels& qrels);

}  // namespace pmr
