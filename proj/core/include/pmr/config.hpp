#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pmr/labeler.hpp"
#include "pmr/profile.hpp"
#include "pmr/query.hpp"
#include "pmr/ranker.hpp"

namespace pmr {

struct PipelinePaths {
  std::filesystem::path corpus;
  std::filesystem::path ontology_dir;
  std::filesystem::path topics;
  std::filesystem::path qrels;
  std::filesystem::path model;
  std::filesystem::path index;
  std::filesystem::path run;
  std::filesystem::path report;
};

/// Everything the pipeline stages read. Loaded from a JSON file (see
/// docs/config.md) and then overridden by CLI flags.
struct PipelineConfig {
  PipelinePaths paths;
  RankingParams ranking;
  QueryOptions query;
  ExpansionOptions expansion;
  TrainingSettings training;
  bool use_labeler = true;
  bool rerank = true;
  IrrelevantPolicy irrelevant_policy = IrrelevantPolicy::filter;
  std::string run_tag = "pmr";
  std::size_t depth = 1000;
  unsigned jobs = 1;

  /// Missing keys keep their defaults; unknown keys are errors. Relative
  /// paths resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& object, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& file);
  nlohmann::json to_json() const;
};

nlohmann::json to_json(const RankingParams& params);
/// Applies the keys present in `object` on top of `base` and validates.
RankingParams ranking_from_json(const nlohmann::json& object, RankingParams base = {});

}  // namespace pmr
