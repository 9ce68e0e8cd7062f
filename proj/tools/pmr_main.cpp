// pmr -- precision-medicine article retrieval pipeline.
//
//   pmr [--config cfg.json] index|expand|search|train|run|evaluate|serve [options]
//
// Every path and ranking parameter in the config file can be overridden
// on the command line; see README.md for the full list.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "pmr/commands.hpp"
#include "pmr/engine.hpp"
#include "pmr/service.hpp"

namespace {

struct Overrides {
  std::optional<std::string> corpus, ontology, topics, qrels, model, index, run, report;
  std::optional<double> k, ws, wh, wy, h_axis, y_axis, ch, cy;
  std::optional<std::string> formula;
  bool no_labeler = false;
  bool no_rerank = false;
  bool no_variants = false;
  bool demote = false;
  std::optional<unsigned> jobs;
  std::optional<std::size_t> depth;
  std::optional<std::string> tag;
  std::optional<std::string> optimizer;
  std::optional<double> learning_rate;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
};

void apply(const Overrides& o, pmr::PipelineConfig& c) {
  auto path = [](const std::optional<std::string>& v, std::filesystem::path& target) {
    if (v) target = *v;
  };
  path(o.corpus, c.paths.corpus);
  path(o.ontology, c.paths.ontology_dir);
  path(o.topics, c.paths.topics);
  path(o.qrels, c.paths.qrels);
  path(o.model, c.paths.model);
  path(o.index, c.paths.index);
  path(o.run, c.paths.run);
  path(o.report, c.paths.report);

  auto num = [](const std::optional<double>& v, double& target) {
    if (v) target = *v;
  };
  num(o.k, c.ranking.k);
  num(o.ws, c.ranking.w_s);
  num(o.wh, c.ranking.w_h);
  num(o.wy, c.ranking.w_y);
  num(o.h_axis, c.ranking.h_axis);
  num(o.y_axis, c.ranking.y_axis);
  num(o.ch, c.ranking.c_h);
  num(o.cy, c.ranking.c_y);
  if (o.formula) c.ranking.formula = pmr::parse_formula(*o.formula);
  c.ranking.validate();

  if (o.no_labeler) c.use_labeler = false;
  if (o.no_rerank) c.rerank = false;
  if (o.no_variants) c.expansion.use_variant_table = false;
  if (o.demote) c.irrelevant_policy = pmr::IrrelevantPolicy::demote;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.depth) c.depth = *o.depth;
  if (o.tag) c.run_tag = *o.tag;
  if (o.optimizer) c.training.optimizer.kind = pmr::parse_optimizer(*o.optimizer);
  if (o.learning_rate) c.training.optimizer.learning_rate = *o.learning_rate;
  if (o.epochs) c.training.epochs = *o.epochs;
  if (o.seed) c.training.seed = *o.seed;
}

pmr::ServiceHost* g_host = nullptr;

void on_signal(int) {
  if (g_host) g_host->stop();
}

int serve(const pmr::PipelineConfig& config, std::string bind, int port) {
  if (const char* env = std::getenv("PMR_BIND"); env && bind.empty()) bind = env;
  if (const char* env = std::getenv("PMR_PORT"); env && port == 0) port = std::atoi(env);
  if (bind.empty()) bind = "127.0.0.1";
  if (port == 0) port = 8080;

  std::shared_ptr<const pmr::Engine> engine;
  try {
    engine = std::make_shared<const pmr::Engine>(pmr::Engine::load(config));
  } catch (const pmr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pmr::kExitUsage;
  }
  auto service = std::make_shared<const pmr::SearchService>(engine);
  pmr::ServiceHost host(service);
  g_host = &host;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "serving " << engine->index().size() << " articles on http://" << bind << ':' << port << '\n';
  const bool ok = host.listen(bind, port);
  g_host = nullptr;
  if (!ok) {
    std::cerr << "error: cannot listen on " << bind << ':' << port << '\n';
    return pmr::kExitFailure;
  }
  return pmr::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precision-medicine article retrieval: index, expand, search, train, run, evaluate, serve"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  Overrides o;
  app.add_option("--config", config_file, "JSON pipeline config")->check(CLI::ExistingFile);
  auto* paths = "Paths";
  app.add_option("--corpus", o.corpus, "NDJSON article corpus")->group(paths);
  app.add_option("--ontology", o.ontology, "Directory with diseases/genes/variants/drugs/journals .tsv")->group(paths);
  app.add_option("--topics", o.topics, "Topics JSON file")->group(paths);
  app.add_option("--qrels", o.qrels, "Qrels file")->group(paths);
  app.add_option("--model", o.model, "Perceptron model file")->group(paths);
  app.add_option("--index", o.index, "Index snapshot file")->group(paths);
  app.add_option("--run", o.run, "Run file")->group(paths);
  app.add_option("--report", o.report, "Evaluation report output")->group(paths);

  auto* ranking = "Ranking";
  app.add_option("--k", o.k, "Bucket width k (default 20)")->group(ranking);
  app.add_option("--ws", o.ws, "Weight of the within-bucket score")->group(ranking);
  app.add_option("--wh", o.wh, "Weight of journal impact")->group(ranking);
  app.add_option("--wy", o.wy, "Weight of publication year")->group(ranking);
  app.add_option("--h-axis", o.h_axis, "Impact symmetry axis (default 200)")->group(ranking);
  app.add_option("--y-axis", o.y_axis, "Year symmetry axis (default 2008)")->group(ranking);
  app.add_option("--ch", o.ch, "Impact sigmoid scale (default 0.05)")->group(ranking);
  app.add_option("--cy", o.cy, "Year sigmoid scale (default 1)")->group(ranking);
  app.add_option("--formula", o.formula, "Secondary score: additive or as_printed")->group(ranking);

  auto* pipeline = "Pipeline";
  app.add_flag("--no-labeler", o.no_labeler, "Skip perceptron relevance labeling")->group(pipeline);
  app.add_flag("--no-rerank", o.no_rerank, "Order by adjusted score only")->group(pipeline);
  app.add_flag("--no-variants", o.no_variants, "Do not expand genes with known variants")->group(pipeline);
  app.add_flag("--demote", o.demote, "Demote labeled-irrelevant articles instead of dropping them")->group(pipeline);
  app.add_option("--jobs", o.jobs, "Topics searched concurrently")->group(pipeline);
  app.add_option("--depth", o.depth, "Run lines per topic (default 1000)")->group(pipeline);
  app.add_option("--tag", o.tag, "Run tag")->group(pipeline);

  auto* index_cmd = app.add_subcommand("index", "Ingest the corpus and write an index snapshot");
  auto* expand_cmd = app.add_subcommand("expand", "Print ontology expansion of every topic");

  pmr::SearchRequestArgs search_args;
  std::optional<std::string> topic_id;
  std::optional<std::string> profile_json;
  auto* search_cmd = app.add_subcommand("search", "Search one topic or inline profile");
  search_cmd->add_option("--topic", topic_id, "Topic id from the topics file");
  search_cmd->add_option("--profile", profile_json, "Inline profile JSON");
  search_cmd->add_option("--limit", search_args.limit, "Results to print");
  search_cmd->add_flag("--explain", search_args.explain, "Print the query and per-clause scores");

  double holdout = 0.0;
  auto* train_cmd = app.add_subcommand("train", "Train the relevance perceptron from qrels");
  train_cmd->add_option("--optimizer", o.optimizer, "sgd, adagrad or adadelta");
  train_cmd->add_option("--lr", o.learning_rate, "Learning rate");
  train_cmd->add_option("--epochs", o.epochs, "Training epochs");
  train_cmd->add_option("--seed", o.seed, "Shuffle seed");
  train_cmd->add_option("--holdout", holdout, "Fraction of examples held out for accuracy");

  auto* run_cmd = app.add_subcommand("run", "Run every topic and write a trec run");
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a run against qrels");

  std::string bind;
  int port = 0;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--bind", bind, "Bind address (env PMR_BIND, default 127.0.0.1)");
  serve_cmd->add_option("--port", port, "Port (env PMR_PORT, default 8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pmr::kExitUsage;
  }

  pmr::PipelineConfig config;
  try {
    if (!config_file.empty()) config = pmr::PipelineConfig::load(config_file);
    apply(o, config);
  } catch (const pmr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pmr::kExitUsage;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (*index_cmd) return pmr::cmd_index(config, out, err);
  if (*expand_cmd) return pmr::cmd_expand(config, out, err);
  if (*search_cmd) {
    search_args.topic_id = topic_id;
    search_args.profile_json = profile_json;
    return pmr::cmd_search(config, search_args, out, err);
  }
  if (*train_cmd) return pmr::cmd_train(config, holdout, out, err);
  if (*run_cmd) return pmr::cmd_run(config, out, err);
  if (*eval_cmd) return pmr::cmd_evaluate(config, out, err);
  if (*serve_cmd) return serve(config, bind, port);
  return pmr::kExitUsage;
}
