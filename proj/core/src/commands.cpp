#include "pmr/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pmr/engine.hpp"

namespace pmr {

using nlohmann::json;

namespace {

bool require_file(const std::filesystem::path& path, std::string_view what, std::ostream& err) {
  if (path.empty()) {
    err << "error: no " << what << " path configured\n";
    return false;
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    err << "error: " << what << " not found: " << path.string() << '\n';
    return false;
  }
  return true;
}

bool require_ontologies(const std::filesystem::path& dir, std::ostream& err) {
  if (dir.empty()) {
    err << "error: no ontology directory configured\n";
    return false;
  }
  const auto p = OntologyPaths::in_directory(dir);
  return require_file(p.diseases, "disease table", err) && require_file(p.genes, "gene table", err) &&
         require_file(p.variants, "variant table", err) && require_file(p.drugs, "drug table", err) &&
         require_file(p.journals, "journal table", err);
}

void report_issues(const Issues& issues, std::ostream& err) {
  for (const auto& i : issues) err << "warning: " << i.to_string() << '\n';
}

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

int cmd_index(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.corpus, "corpus", err)) return kExitUsage;
  if (config.paths.index.empty()) {
    err << "error: no index snapshot path configured\n";
    return kExitUsage;
  }
  std::ifstream in(config.paths.corpus);
  if (!in) {
    err << "error: cannot read corpus " << config.paths.corpus.string() << '\n';
    return kExitUsage;
  }
  auto result = ingest_corpus(in, config.paths.corpus.string());
  report_issues(result.issues, err);

  std::ofstream snapshot(config.paths.index, std::ios::binary);
  if (!snapshot) {
    err << "error: cannot write index snapshot " << config.paths.index.string() << '\n';
    return kExitFailure;
  }
  result.index.write_snapshot(snapshot);
  snapshot.close();
  if (!snapshot) {
    err << "error: failed writing " << config.paths.index.string() << '\n';
    return kExitFailure;
  }
  out << "read " << result.records_read << " records: kept " << result.kept << ", filtered " << result.filtered
      << " (MeSH), skipped " << result.rejected << " (malformed or duplicate)\n";
  out << "wrote " << config.paths.index.string() << " (N=" << result.index.size() << ")\n";
  return kExitOk;
}

int cmd_expand(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.topics, "topics file", err) || !require_ontologies(config.paths.ontology_dir, err))
    return kExitUsage;
  try {
    auto loaded = load_tables(OntologyPaths::in_directory(config.paths.ontology_dir));
    report_issues(loaded.issues, err);
    auto topics = parse_topics(config.paths.topics);
    report_issues(topics.issues, err);
    json all = json::array();
    for (const auto& t : topics.topics)
      all.push_back({{"id", t.id}, {"expansion", to_json(expand_profile(t.profile, loaded.tables, config.expansion))}});
    out << all.dump(2) << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_search(const PipelineConfig& config, const SearchRequestArgs& args, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.index, "index snapshot", err) || !require_ontologies(config.paths.ontology_dir, err))
    return kExitUsage;
  if (config.use_labeler && !require_file(config.paths.model, "model", err)) return kExitUsage;

  PatientProfile profile;
  try {
    if (args.profile_json) {
      std::vector<std::string> warnings;
      profile = profile_from_json(json::parse(*args.profile_json), &warnings);
      for (const auto& w : warnings) err << "warning: " << w << '\n';
    } else if (args.topic_id) {
      if (!require_file(config.paths.topics, "topics file", err)) return kExitUsage;
      auto topics = parse_topics(config.paths.topics);
      auto it = std::find_if(topics.topics.begin(), topics.topics.end(), [&](const Topic& t) { return t.id == *args.topic_id; });
      if (it == topics.topics.end()) {
        err << "error: topic " << *args.topic_id << " not found\n";
        return kExitUsage;
      }
      profile = it->profile;
    } else {
      err << "error: search needs --topic or --profile\n";
      return kExitUsage;
    }
  } catch (const json::exception& e) {
    err << "error: invalid profile JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Engine engine = Engine::load(config);
    const auto outcome = engine.search(profile, config.ranking);
    if (args.explain) {
      out << "query:\n" << outcome.query.to_string();
      out << "matched " << outcome.matched << ", demographic rejected " << outcome.demographic_rejected
          << ", label rejected " << outcome.label_rejected << '\n';
    }
    const std::size_t shown = std::min(args.limit, outcome.ranked.size());
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& r = outcome.ranked[i];
      const auto& a = engine.index().article(r.doc);
      out << r.rank << '\t' << r.pmid << "\ts=" << format_score(r.score) << "\tr1=" << r.r1
          << "\tr2=" << format_score(r.r2) << '\t' << (r.label ? label_name(*r.label) : "unlabeled") << '\t'
          << a.title << '\n';
      if (args.explain) {
        const auto& q = outcome.query;
        std::size_t i_clause = 0;
        for (const auto* group : {&q.must, &q.should}) {
          for (const auto& c : *group) {
            out << "    " << (group == &q.must ? '+' : ' ') << c.label << " = " << format_score(r.clause_scores[i_clause++])
                << '\n';
          }
        }
        out << "    coord = " << format_score(r.coord) << "  sigma(h) = " << format_score(r.sigma_h)
            << "  sigma(y) = " << format_score(r.sigma_y) << '\n';
      }
    }
    if (outcome.ranked.empty()) err << "warning: no articles matched\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_train(const PipelineConfig& config, double holdout, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.index, "index snapshot", err) || !require_ontologies(config.paths.ontology_dir, err) ||
      !require_file(config.paths.topics, "topics file", err) || !require_file(config.paths.qrels, "qrels", err))
    return kExitUsage;
  if (config.paths.model.empty()) {
    err << "error: no model output path configured\n";
    return kExitUsage;
  }
  if (!(holdout >= 0.0 && holdout < 1.0)) {
    err << "error: holdout fraction must be in [0, 1)\n";
    return kExitUsage;
  }
  try {
    PipelineConfig no_model = config;
    no_model.use_labeler = false;
    const Engine engine = Engine::load(no_model);
    auto topics = parse_topics(config.paths.topics);
    report_issues(topics.issues, err);
    std::ifstream qin(config.paths.qrels);
    auto qrels = read_qrels(qin, config.paths.qrels.string());
    report_issues(qrels.issues, err);

    auto examples = build_training_set(engine, topics.topics, qrels.qrels);
    std::vector<TrainingExample> held;
    if (holdout > 0.0 && examples.size() > 1) {
      std::vector<std::size_t> order(examples.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::mt19937_64 rng(config.training.seed);
      seeded_shuffle(order, rng);
      const auto n_held = static_cast<std::size_t>(holdout * static_cast<double>(examples.size()));
      std::vector<TrainingExample> kept;
      for (std::size_t i = 0; i < order.size(); ++i)
        (i < n_held ? held : kept).push_back(std::move(examples[order[i]]));
      examples = std::move(kept);
    }
    const auto model = train(examples, config.training);
    std::ofstream mout(config.paths.model);
    if (!mout) {
      err << "error: cannot write model " << config.paths.model.string() << '\n';
      return kExitFailure;
    }
    model.write(mout);
    out << "trained " << optimizer_name(config.training.optimizer.kind) << " perceptron on " << examples.size()
        << " examples (" << model.updates << " updates), training accuracy " << format_score(accuracy(model, examples))
        << '\n';
    if (!held.empty())
      out << "holdout accuracy " << format_score(accuracy(model, held)) << " on " << held.size() << " examples\n";
    out << "wrote " << config.paths.model.string() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

RunFile make_run(const Engine& engine, const std::vector<Topic>& topics, const PipelineConfig& config,
                 std::ostream& err, bool* any_failure) {
  struct TopicResult {
    std::vector<RunEntry> entries;
    std::string message;
    bool failed = false;
  };
  std::vector<TopicResult> results(topics.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < topics.size(); i = next++) {
      auto& r = results[i];
      try {
        const auto outcome = engine.search(topics[i].profile, config.ranking);
        const std::size_t depth = std::min(config.depth, outcome.ranked.size());
        for (std::size_t j = 0; j < depth; ++j) {
          const auto& a = outcome.ranked[j];
          // Scores strictly decrease with rank so score-sorting evaluators
          // reproduce the engine's order.
          r.entries.push_back({a.pmid, static_cast<int>(j + 1), static_cast<double>(depth - j), config.run_tag});
        }
        if (outcome.ranked.empty()) r.message = "warning: topic " + topics[i].id + " matched no articles";
      } catch (const std::exception& e) {
        r.failed = true;
        r.message = "error: topic " + topics[i].id + ": " + e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(topics.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunFile run;
  bool failed = false;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    if (!results[i].message.empty()) err << results[i].message << '\n';
    failed = failed || results[i].failed;
    if (!results[i].entries.empty()) run.topics[topics[i].id] = std::move(results[i].entries);
  }
  if (any_failure) *any_failure = failed;
  return run;
}

int cmd_run(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.index, "index snapshot", err) || !require_ontologies(config.paths.ontology_dir, err) ||
      !require_file(config.paths.topics, "topics file", err))
    return kExitUsage;
  if (config.use_labeler && !require_file(config.paths.model, "model", err)) return kExitUsage;
  try {
    const Engine engine = Engine::load(config);
    auto topics = parse_topics(config.paths.topics);
    report_issues(topics.issues, err);
    const bool failed = topics.rejected > 0;
    bool topic_failure = false;
    RunFile run = make_run(engine, topics.topics, config, err, &topic_failure);
    if (config.paths.run.empty()) {
      write_run(out, run);
    } else {
      std::ofstream rout(config.paths.run);
      if (!rout) {
        err << "error: cannot write run " << config.paths.run.string() << '\n';
        return kExitFailure;
      }
      write_run(rout, run);
      std::size_t lines = 0;
      for (const auto& [_, e] : run.topics) lines += e.size();
      out << "wrote " << lines << " lines for " << run.topics.size() << " of " << topics.topics.size() << " topics to "
          << config.paths.run.string() << '\n';
    }
    return (failed || topic_failure) ? kExitFailure : kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cmd_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
  if (!require_file(config.paths.qrels, "qrels", err) || !require_file(config.paths.run, "run file", err))
    return kExitUsage;
  std::ifstream qin(config.paths.qrels);
  std::ifstream rin(config.paths.run);
  auto qrels = read_qrels(qin, config.paths.qrels.string());
  auto run = read_run(rin, config.paths.run.string());
  report_issues(qrels.issues, err);
  report_issues(run.issues, err);

  const auto report = evaluate(run.run, qrels.qrels);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  out << report.to_text();
  if (!config.paths.report.empty()) {
    std::ofstream text(config.paths.report);
    std::ofstream js(config.paths.report.string() + ".json");
    if (!text || !js) {
      err << "error: cannot write report " << config.paths.report.string() << '\n';
      return kExitFailure;
    }
    text << report.to_records();
    js << report.to_json().dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace pmr
