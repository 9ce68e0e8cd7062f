#include "pmr/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace pmr {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, std::string_view section, std::initializer_list<const char*> known) {
  if (!object.is_object()) throw Error("config section '" + std::string(section) + "' must be an object");
  std::set<std::string_view> allowed(known.begin(), known.end());
  for (const auto& [key, _] : object.items())
    if (!allowed.count(key)) throw Error("unknown config key '" + std::string(section) + "." + key + "'");
}

template <typename T>
void read(const json& object, const char* key, T& target) {
  if (auto it = object.find(key); it != object.end() && !it->is_null()) {
    try {
      target = it->get<T>();
    } catch (const json::exception&) {
      throw Error(std::string("config key '") + key + "' has the wrong type");
    }
  }
}

void read_path(const json& object, const char* key, std::filesystem::path& target, const std::filesystem::path& base) {
  std::string value;
  read(object, key, value);
  if (value.empty()) return;
  std::filesystem::path p(value);
  target = (p.is_relative() && !base.empty()) ? base / p : p;
}

}  // namespace

json to_json(const RankingParams& p) {
  return {{"k", p.k},           {"w_s", p.w_s}, {"w_h", p.w_h}, {"w_y", p.w_y}, {"h_axis", p.h_axis},
          {"y_axis", p.y_axis}, {"c_h", p.c_h}, {"c_y", p.c_y}, {"formula", formula_name(p.formula)}};
}

RankingParams ranking_from_json(const json& object, RankingParams p) {
  reject_unknown(object, "ranking", {"k", "w_s", "w_h", "w_y", "h_axis", "y_axis", "c_h", "c_y", "formula"});
  read(object, "k", p.k);
  read(object, "w_s", p.w_s);
  read(object, "w_h", p.w_h);
  read(object, "w_y", p.w_y);
  read(object, "h_axis", p.h_axis);
  read(object, "y_axis", p.y_axis);
  read(object, "c_h", p.c_h);
  read(object, "c_y", p.c_y);
  std::string formula;
  read(object, "formula", formula);
  if (!formula.empty()) p.formula = parse_formula(formula);
  p.validate();
  return p;
}

PipelineConfig PipelineConfig::from_json(const json& object, const std::filesystem::path& base) {
  PipelineConfig c;
  reject_unknown(object, "config", {"paths", "ranking", "query", "expansion", "labeler", "rerank", "run"});

  if (auto it = object.find("paths"); it != object.end()) {
    reject_unknown(*it, "paths", {"corpus", "ontology_dir", "topics", "qrels", "model", "index", "run", "report"});
    read_path(*it, "corpus", c.paths.corpus, base);
    read_path(*it, "ontology_dir", c.paths.ontology_dir, base);
    read_path(*it, "topics", c.paths.topics, base);
    read_path(*it, "qrels", c.paths.qrels, base);
    read_path(*it, "model", c.paths.model, base);
    read_path(*it, "index", c.paths.index, base);
    read_path(*it, "run", c.paths.run, base);
    read_path(*it, "report", c.paths.report, base);
  }
  if (auto it = object.find("ranking"); it != object.end()) c.ranking = ranking_from_json(*it, c.ranking);
  if (auto it = object.find("query"); it != object.end()) {
    reject_unknown(*it, "query", {"should_boost", "variant_boost", "age_should"});
    read(*it, "should_boost", c.query.should_boost);
    read(*it, "variant_boost", c.query.variant_boost);
    read(*it, "age_should", c.query.age_should);
    if (!(c.query.should_boost > 0.0) || !(c.query.variant_boost > 0.0)) throw Error("query boosts must be positive");
  }
  if (auto it = object.find("expansion"); it != object.end()) {
    reject_unknown(*it, "expansion", {"use_variants", "treatment_keywords"});
    read(*it, "use_variants", c.expansion.use_variant_table);
    read(*it, "treatment_keywords", c.expansion.treatment_keywords);
  }
  if (auto it = object.find("labeler"); it != object.end()) {
    reject_unknown(*it, "labeler", {"enabled", "optimizer", "learning_rate", "epochs", "seed", "rho",
                                    "adadelta_epsilon", "adagrad_epsilon", "irrelevant_policy"});
    read(*it, "enabled", c.use_labeler);
    std::string name;
    read(*it, "optimizer", name);
    if (!name.empty()) c.training.optimizer.kind = parse_optimizer(name);
    read(*it, "learning_rate", c.training.optimizer.learning_rate);
    read(*it, "epochs", c.training.epochs);
    read(*it, "seed", c.training.seed);
    read(*it, "rho", c.training.optimizer.rho);
    read(*it, "adadelta_epsilon", c.training.optimizer.adadelta_epsilon);
    read(*it, "adagrad_epsilon", c.training.optimizer.adagrad_epsilon);
    std::string policy;
    read(*it, "irrelevant_policy", policy);
    if (policy == "demote") {
      c.irrelevant_policy = IrrelevantPolicy::demote;
    } else if (!policy.empty() && policy != "filter") {
      throw Error("labeler.irrelevant_policy must be 'filter' or 'demote'");
    }
  }
  read(object, "rerank", c.rerank);
  if (auto it = object.find("run"); it != object.end()) {
    reject_unknown(*it, "run", {"tag", "depth", "jobs"});
    read(*it, "tag", c.run_tag);
    read(*it, "depth", c.depth);
    read(*it, "jobs", c.jobs);
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open config file " + file.string());
  json object;
  try {
    object = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("config file " + file.string() + ": " + e.what());
  }
  return from_json(object, file.parent_path());
}

json PipelineConfig::to_json() const {
  auto path = [](const std::filesystem::path& p) { return p.empty() ? json(nullptr) : json(p.string()); };
  const auto& o = training.optimizer;
  return {
      {"paths",
       {{"corpus", path(paths.corpus)},
        {"ontology_dir", path(paths.ontology_dir)},
        {"topics", path(paths.topics)},
        {"qrels", path(paths.qrels)},
        {"model", path(paths.model)},
        {"index", path(paths.index)},
        {"run", path(paths.run)},
        {"report", path(paths.report)}}},
      {"ranking", pmr::to_json(ranking)},
      {"query",
       {{"should_boost", query.should_boost}, {"variant_boost", query.variant_boost}, {"age_should", query.age_should}}},
      {"expansion", {{"use_variants", expansion.use_variant_table}, {"treatment_keywords", expansion.treatment_keywords}}},
      {"labeler",
       {{"enabled", use_labeler},
        {"optimizer", optimizer_name(o.kind)},
        {"learning_rate", o.learning_rate},
        {"epochs", training.epochs},
        {"seed", training.seed},
        {"rho", o.rho},
        {"adadelta_epsilon", o.adadelta_epsilon},
        {"adagrad_epsilon", o.adagrad_epsilon},
        {"irrelevant_policy", irrelevant_policy == IrrelevantPolicy::filter ? "filter" : "demote"}}},
      {"rerank", rerank},
      {"run", {{"tag", run_tag}, {"depth", depth}, {"jobs", jobs}}},
  };
}

}  // namespace pmr
