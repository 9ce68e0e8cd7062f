#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pmr/article.hpp"
#include "pmr/optimizer.hpp"
#include "pmr/profile.hpp"
#include "pmr/query.hpp"

namespace pmr {

enum class TermClass : std::uint8_t { disease = 0, gene = 1, treatment = 2 };

inline constexpr std::size_t kTermClassCount = 3;
/// term class x field x {token, phrase} frequencies, then bias.
inline constexpr std::size_t kFeatureCount = kTermClassCount * kFieldCount * 2 + 1;
inline constexpr std::size_t kBiasFeature = kFeatureCount - 1;

using FeatureVector = std::array<double, kFeatureCount>;

constexpr std::size_t token_feature(TermClass cls, Field field) {
  return (static_cast<std::size_t>(cls) * kFieldCount + static_cast<std::size_t>(field)) * 2;
}
constexpr std::size_t phrase_feature(TermClass cls, Field field) { return token_feature(cls, field) + 1; }

std::string feature_name(std::size_t feature);

/// Length-normalized term and phrase frequencies of the profile's disease,
/// gene (including variants) and drug/treatment terms in each field.
FeatureVector extract_features(const Article& article, const ExpandedProfile& profile);

struct TrainingExample {
  std::vector<double> features;
  int grade = 0;  // 0, 1 or 2; grade >= 1 is the positive class
  std::string id;
};

struct TrainingSettings {
  OptimizerSettings optimizer;
  int epochs = 10;
  std::uint64_t seed = 42;
};

struct PerceptronModel {
  std::vector<double> weights;
  TrainingSettings settings;
  std::size_t examples = 0;
  std::size_t updates = 0;

  double activation(std::span<const double> features) const;
  /// relevant iff w.x > 0
  Label predict(std::span<const double> features) const;

  void write(std::ostream& out) const;
  static PerceptronModel read(std::istream& in);
};

inline constexpr int kModelVersion = 1;

/// Perceptron training: each epoch visits the examples in a seeded
/// shuffle and hands -y*x to the optimizer on every y(w.x) <= 0.
/// Throws pmr::Error for an empty set, mismatched dimensions,
/// non-finite features, or a non-positive learning rate.
PerceptronModel train(std::span<const TrainingExample> examples, const TrainingSettings& settings);

/// Fraction of examples whose prediction agrees with grade >= 1.
double accuracy(const PerceptronModel& model, std::span<const TrainingExample> examples);

/// Deterministic Fisher-Yates over a 64-bit Mersenne twister, independent
/// of the standard library's distribution implementations.
void seeded_shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng);

}  // namespace pmr
