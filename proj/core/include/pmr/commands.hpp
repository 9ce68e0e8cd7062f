#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "pmr/config.hpp"
#include "pmr/engine.hpp"
#include "pmr/evaluation.hpp"
#include "pmr/profile.hpp"

namespace pmr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;  // missing or unreadable input

// Subcommand bodies behind tools/pmr. Each returns a process exit code and
// writes results to `out`, diagnostics to `err`.

/// Ingests paths.corpus and writes the snapshot to paths.index.
int cmd_index(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// Prints the expansion of every topic as JSON.
int cmd_expand(const PipelineConfig& config, std::ostream& out, std::ostream& err);

struct SearchRequestArgs {
  std::optional<std::string> topic_id;   // from paths.topics
  std::optional<std::string> profile_json;  // inline profile object
  std::size_t limit = 10;
  bool explain = false;
};

int cmd_search(const PipelineConfig& config, const SearchRequestArgs& args, std::ostream& out, std::ostream& err);

/// Trains on judged articles of paths.topics / paths.qrels and writes
/// paths.model. `holdout` in [0, 1) reserves that fraction of examples.
int cmd_train(const PipelineConfig& config, double holdout, std::ostream& out, std::ostream& err);

/// Runs every topic and writes a trec run to paths.run (or `out` when empty).
int cmd_run(const PipelineConfig& config, std::ostream& out, std::ostream& err);

/// Builds the run in memory; used by cmd_run and the tests.
RunFile make_run(const Engine& engine, const std::vector<Topic>& topics, const PipelineConfig& config,
                 std::ostream& err, bool* any_failure = nullptr);

/// Evaluates paths.run against paths.qrels; writes the report to
/// paths.report (plus `.json`) when set, and to `out`.
int cmd_evaluate(const PipelineConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pmr
