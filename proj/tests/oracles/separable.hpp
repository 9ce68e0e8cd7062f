#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pmr/labeler.hpp"

namespace pmr::oracle {

struct SeparableSet {
  std::vector<TrainingExample> examples;
  std::vector<double> normal;  // unit normal of the generating hyperplane
  double offset = 0.0;
};

/// Points uniform in [-1, 1]^dim labelled by a random hyperplane, keeping
/// only those at distance >= margin from it. A constant 1 is appended to
/// each feature vector as the bias input.
inline SeparableSet separable_set(std::uint64_t seed, std::size_t count, std::size_t dim, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  SeparableSet set;
  double norm = 0.0;
  while (norm < 1e-3) {
    set.normal.assign(dim, 0.0);
    norm = 0.0;
    for (auto& v : set.normal) {
      v = unit(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
  }
  for (auto& v : set.normal) v /= norm;
  set.offset = 0.5 * unit(rng);
  std::size_t positives = 0;
  while (set.examples.size() < count || positives == 0 || positives == set.examples.size()) {
    if (set.examples.size() >= count) {  // one class missing: start over
      set.examples.clear();
      positives = 0;
    }
    std::vector<double> x(dim);
    double d = set.offset;
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = unit(rng);
      d += set.normal[i] * x[i];
    }
    if (std::fabs(d) < margin) continue;
    x.push_back(1.0);
    positives += d > 0;
    set.examples.push_back({std::move(x), d > 0 ? 2 : 0, "p" + std::to_string(set.examples.size())});
  }
  return set;
}

}  // namespace pmr::oracle
