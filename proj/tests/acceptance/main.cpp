#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "criteria.hpp"

namespace {

void usage() {
  std::cerr << "usage: pmr_acceptance [--fixtures DIR] [--python EXE --reference-script FILE] [--only NAME]\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pmr::acceptance;
  Context ctx;
  ctx.fixtures = PMR_FIXTURES_DIR;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (i + 1 >= argc) {
      usage();
      return 2;
    }
    const std::string value = argv[++i];
    if (arg == "--fixtures") {
      ctx.fixtures = value;
    } else if (arg == "--python") {
      ctx.python = value;
    } else if (arg == "--reference-script") {
      ctx.reference_script = value;
    } else if (arg == "--only") {
      only = value;
    } else {
      usage();
      return 2;
    }
  }

  struct Criterion {
    const char* name;
    Outcome (*run)(const Context&);
  };
  const std::vector<Criterion> criteria{
      {"metric-oracle", metric_oracle},
      {"ranking-properties", ranking_properties},
      {"boolean-retrieval-oracle", boolean_oracle},
      {"perceptron-suite", perceptron_suite},
      {"planted-end-to-end", planted_end_to_end},
      {"external-data-check", external_data_check},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run(ctx);
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char elapsed[32];
    std::snprintf(elapsed, sizeof elapsed, "%.2fs", seconds);
    std::cout << (outcome.passed ? "PASS " : "FAIL ") << c.name << " [" << elapsed << "] " << outcome.detail
              << std::endl;
    failures += outcome.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
