#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "pmr/config.hpp"
#include "pmr/corpus_index.hpp"
#include "pmr/evaluation.hpp"
#include "pmr/labeler.hpp"
#include "pmr/ontology.hpp"
#include "pmr/profile.hpp"
#include "pmr/query.hpp"
#include "pmr/ranker.hpp"

namespace pmr {

struct EngineSettings {
  ExpansionOptions expansion;
  QueryOptions query;
  RankingParams ranking;
  bool use_labeler = true;
  bool rerank = true;
  IrrelevantPolicy irrelevant_policy = IrrelevantPolicy::filter;

  static EngineSettings from_config(const PipelineConfig& config);
};

struct SearchOutcome {
  ExpandedProfile expanded;
  Query query;
  std::vector<ScoredArticle> ranked;
  std::size_t matched = 0;                // passed the boolean query
  std::size_t demographic_rejected = 0;
  std::size_t label_rejected = 0;
};

/// The per-topic main cycle: expand, formulate, execute, demographic
/// filter, label, rank. Immutable after construction; search() may be
/// called from any number of threads.
class Engine {
 public:
  Engine(Index index, OntologyTables tables, std::optional<PerceptronModel> model, EngineSettings settings);

  /// Reads the index snapshot, ontology directory and (when labeling is
  /// enabled) the model named in the config.
  static Engine load(const PipelineConfig& config);

  ExpandedProfile expand(const PatientProfile& profile) const;

  SearchOutcome search(const PatientProfile& profile) const { return search(profile, settings_.ranking); }
  SearchOutcome search(const PatientProfile& profile, const RankingParams& params) const;
  /// Searches with a caller-edited expansion instead of expanding again.
  SearchOutcome search(const PatientProfile& profile, ExpandedProfile expanded, const RankingParams& params) const;

  const Index& index() const { return index_; }
  const OntologyTables& tables() const { return tables_; }
  const std::optional<PerceptronModel>& model() const { return model_; }
  const EngineSettings& settings() const { return settings_; }

 private:
  Index index_;
  OntologyTables tables_;
  std::optional<PerceptronModel> model_;
  EngineSettings settings_;
};

/// Labeled examples for every judged (topic, pmid) present in the index.
std::vector<TrainingExample> build_training_set(const Engine& engine, const std::vector<Topic>& topics,
                                                const Qrels& qrels);

}  // namespace pmr
