#include "pmr/engine.hpp"

#include <fstream>

namespace pmr {

EngineSettings EngineSettings::from_config(const PipelineConfig& c) {
  return {c.expansion, c.query, c.ranking, c.use_labeler, c.rerank, c.irrelevant_policy};
}

Engine::Engine(Index index, OntologyTables tables, std::optional<PerceptronModel> model, EngineSettings settings)
    : index_(std::move(index)), tables_(std::move(tables)), model_(std::move(model)), settings_(std::move(settings)) {
  settings_.ranking.validate();
  if (model_ && model_->weights.size() != kFeatureCount)
    throw Error("model has " + std::to_string(model_->weights.size()) + " weights, expected " +
                std::to_string(kFeatureCount));
}

Engine Engine::load(const PipelineConfig& config) {
  if (config.paths.index.empty()) throw Error("no index snapshot configured");
  std::ifstream in(config.paths.index);
  if (!in) throw Error("cannot open index snapshot " + config.paths.index.string());
  Index index = Index::read_snapshot(in);

  if (config.paths.ontology_dir.empty()) throw Error("no ontology directory configured");
  auto loaded = load_tables(OntologyPaths::in_directory(config.paths.ontology_dir));

  std::optional<PerceptronModel> model;
  if (config.use_labeler) {
    if (config.paths.model.empty()) throw Error("labeling is enabled but no model is configured");
    std::ifstream model_in(config.paths.model);
    if (!model_in) throw Error("cannot open model " + config.paths.model.string());
    model = PerceptronModel::read(model_in);
  }
  return Engine(std::move(index), std::move(loaded.tables), std::move(model), EngineSettings::from_config(config));
}

ExpandedProfile Engine::expand(const PatientProfile& profile) const {
  return expand_profile(profile, tables_, settings_.expansion);
}

SearchOutcome Engine::search(const PatientProfile& profile, const RankingParams& params) const {
  return search(profile, expand(profile), params);
}

SearchOutcome Engine::search(const PatientProfile& profile, ExpandedProfile expanded, const RankingParams& params) const {
  SearchOutcome outcome;
  outcome.query = formulate_query(expanded, settings_.query);
  auto hits = execute(outcome.query, index_);
  outcome.matched = hits.size();

  const bool labeling = settings_.use_labeler && model_.has_value();
  std::vector<ScoredArticle> candidates;
  candidates.reserve(hits.size());
  for (auto& hit : hits) {
    const Article& article = index_.article(hit.doc);
    if (!demographic_compatible(article, profile.gender)) {
      ++outcome.demographic_rejected;
      continue;
    }
    if (labeling) {
      hit.label = model_->predict(extract_features(article, expanded));
      if (hit.label == Label::irrelevant && settings_.irrelevant_policy == IrrelevantPolicy::filter) {
        ++outcome.label_rejected;
        continue;
      }
    }
    candidates.push_back(std::move(hit));
  }
  outcome.ranked = rank(std::move(candidates), index_, tables_.journals, params, RankOptions{settings_.rerank});
  outcome.expanded = std::move(expanded);
  return outcome;
}

std::vector<TrainingExample> build_training_set(const Engine& engine, const std::vector<Topic>& topics,
                                                const Qrels& qrels) {
  std::vector<TrainingExample> examples;
  for (const auto& topic : topics) {
    auto judged = qrels.topics.find(topic.id);
    if (judged == qrels.topics.end()) continue;
    const auto expanded = engine.expand(topic.profile);
    for (const auto& [pmid, grade] : judged->second) {
      auto doc = engine.index().find(pmid);
      if (!doc) continue;
      const auto fv = extract_features(engine.index().article(*doc), expanded);
      examples.push_back({std::vector<double>(fv.begin(), fv.end()), grade, topic.id + "/" + pmid});
    }
  }
  return examples;
}

}  // namespace pmr
