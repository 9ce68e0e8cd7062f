#include "pmr/labeler.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pmr/tokenizer.hpp"

namespace pmr {

std::string feature_name(std::size_t feature) {
  if (feature == kBiasFeature) return "bias";
  static constexpr const char* kClass[] = {"disease", "gene", "treatment"};
  const std::size_t kind = feature % 2;
  const std::size_t field = (feature / 2) % kFieldCount;
  const std::size_t cls = feature / (2 * kFieldCount);
  return std::string(kClass[cls]) + "." + std::string(field_name(kFields[field])) + (kind ? ".phrase" : ".token");
}

namespace {

struct ClassTerms {
  std::unordered_set<std::string> tokens;
  std::set<std::vector<std::string>> phrases;

  void add(const std::string& term) {
    auto toks = tokenize(term);
    if (toks.empty()) return;
    tokens.insert(toks.begin(), toks.end());
    phrases.insert(std::move(toks));
  }
  template <typename Range>
  void add_all(const Range& terms) {
    for (const auto& t : terms) add(t);
  }
};

std::size_t count_occurrences(const std::vector<std::string>& text, const std::vector<std::string>& phrase) {
  if (phrase.size() > text.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + phrase.size() <= text.size(); ++i)
    if (std::equal(phrase.begin(), phrase.end(), text.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  return n;
}

}  // namespace

FeatureVector extract_features(const Article& article, const ExpandedProfile& profile) {
  std::array<ClassTerms, kTermClassCount> classes;
  classes[static_cast<std::size_t>(TermClass::disease)].add_all(profile.disease_terms);
  auto& gene = classes[static_cast<std::size_t>(TermClass::gene)];
  for (const auto& g : profile.genes) {
    gene.add_all(g.gene_terms);
    if (g.specified_variant) gene.add(*g.specified_variant);
    gene.add_all(g.candidate_variants);
  }
  auto& treatment = classes[static_cast<std::size_t>(TermClass::treatment)];
  treatment.add_all(profile.drug_terms);
  treatment.add_all(profile.treatment_keywords);

  FeatureVector fv{};
  for (Field field : kFields) {
    const auto tokens = tokenize(article.field_text(field));
    if (tokens.empty()) continue;
    const double length = static_cast<double>(tokens.size());
    for (std::size_t c = 0; c < kTermClassCount; ++c) {
      const auto cls = static_cast<TermClass>(c);
      std::size_t token_hits = 0;
      for (const auto& t : tokens) token_hits += classes[c].tokens.count(t);
      std::size_t phrase_hits = 0;
      for (const auto& p : classes[c].phrases) phrase_hits += count_occurrences(tokens, p);
      fv[token_feature(cls, field)] = static_cast<double>(token_hits) / length;
      fv[phrase_feature(cls, field)] = static_cast<double>(phrase_hits) / length;
    }
  }
  fv[kBiasFeature] = 1.0;
  return fv;
}

double PerceptronModel::activation(std::span<const double> features) const {
  if (features.size() != weights.size()) throw Error("feature dimension does not match model");
  double a = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) a += weights[i] * features[i];
  return a;
}

Label PerceptronModel::predict(std::span<const double> features) const {
  return activation(features) > 0.0 ? Label::relevant : Label::irrelevant;
}

void PerceptronModel::write(std::ostream& out) const {
  const auto& o = settings.optimizer;
  out << "pmr-perceptron " << kModelVersion << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "optimizer " << optimizer_name(o.kind) << '\n';
  out << "learning_rate " << o.learning_rate << '\n';
  out << "rho " << o.rho << '\n';
  out << "adadelta_epsilon " << o.adadelta_epsilon << '\n';
  out << "adagrad_epsilon " << o.adagrad_epsilon << '\n';
  out << "epochs " << settings.epochs << '\n';
  out << "seed " << settings.seed << '\n';
  out << "examples " << examples << '\n';
  out << "updates " << updates << '\n';
  out << "dimension " << weights.size() << '\n';
  out << "weights";
  for (double w : weights) out << ' ' << w;
  out << '\n';
}

PerceptronModel PerceptronModel::read(std::istream& in) {
  PerceptronModel model;
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "pmr-perceptron") throw Error("not a pmr perceptron model");
  if (version != kModelVersion) throw Error("unsupported model version " + std::to_string(version));

  std::set<std::string> seen;
  std::size_t dimension = 0;
  std::string key;
  while (in >> key) {
    if (!seen.insert(key).second) throw Error("model key '" + key + "' repeated");
    auto& o = model.settings.optimizer;
    bool ok = true;
    if (key == "optimizer") {
      std::string name;
      ok = static_cast<bool>(in >> name);
      if (ok) o.kind = parse_optimizer(name);
    } else if (key == "learning_rate") {
      ok = static_cast<bool>(in >> o.learning_rate);
    } else if (key == "rho") {
      ok = static_cast<bool>(in >> o.rho);
    } else if (key == "adadelta_epsilon") {
      ok = static_cast<bool>(in >> o.adadelta_epsilon);
    } else if (key == "adagrad_epsilon") {
      ok = static_cast<bool>(in >> o.adagrad_epsilon);
    } else if (key == "epochs") {
      ok = static_cast<bool>(in >> model.settings.epochs);
    } else if (key == "seed") {
      ok = static_cast<bool>(in >> model.settings.seed);
    } else if (key == "examples") {
      ok = static_cast<bool>(in >> model.examples);
    } else if (key == "updates") {
      ok = static_cast<bool>(in >> model.updates);
    } else if (key == "dimension") {
      ok = static_cast<bool>(in >> dimension);
    } else if (key == "weights") {
      if (!seen.count("dimension")) throw Error("model 'weights' must follow 'dimension'");
      model.weights.resize(dimension);
      for (auto& w : model.weights) ok = ok && static_cast<bool>(in >> w);
    } else {
      throw Error("unknown model key '" + key + "'");
    }
    if (!ok) throw Error("malformed value for model key '" + key + "'");
  }
  for (const char* required : {"optimizer", "learning_rate", "epochs", "seed", "dimension", "weights"})
    if (!seen.count(required)) throw Error(std::string("model is missing '") + required + "'");
  for (double w : model.weights)
    if (!std::isfinite(w)) throw Error("model contains a non-finite weight");
  return model;
}

void seeded_shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

PerceptronModel train(std::span<const TrainingExample> examples, const TrainingSettings& settings) {
  if (examples.empty()) throw Error("cannot train on zero examples");
  if (!(settings.optimizer.learning_rate > 0.0) || !std::isfinite(settings.optimizer.learning_rate))
    throw Error("learning rate must be positive");
  if (settings.epochs < 1) throw Error("epochs must be at least 1");
  const std::size_t dim = examples.front().features.size();
  if (dim == 0) throw Error("examples have no features");
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    const std::string name = ex.id.empty() ? "#" + std::to_string(i) : ex.id;
    if (ex.features.size() != dim) throw Error("example " + name + " has " + std::to_string(ex.features.size()) +
                                               " features, expected " + std::to_string(dim));
    for (double x : ex.features)
      if (!std::isfinite(x)) throw Error("example " + name + " has a non-finite feature");
    if (ex.grade < 0 || ex.grade > 2) throw Error("example " + name + " has grade outside 0..2");
  }

  PerceptronModel model;
  model.settings = settings;
  model.examples = examples.size();
  model.weights.assign(dim, 0.0);
  auto optimizer = make_optimizer(settings.optimizer, dim);

  std::mt19937_64 rng(settings.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> gradient(dim);

  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    seeded_shuffle(order, rng);
    for (std::size_t idx : order) {
      const auto& ex = examples[idx];
      const double y = ex.grade >= 1 ? 1.0 : -1.0;
      if (y * model.activation(ex.features) > 0.0) continue;
      for (std::size_t i = 0; i < dim; ++i) gradient[i] = -y * ex.features[i];
      optimizer->step(model.weights, gradient);
      ++model.updates;
    }
  }
  for (double w : model.weights)
    if (!std::isfinite(w)) throw Error("training diverged to a non-finite weight");
  return model;
}

double accuracy(const PerceptronModel& model, std::span<const TrainingExample> examples) {
  if (examples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& ex : examples) {
    const bool positive = ex.grade >= 1;
    correct += (model.predict(ex.features) == Label::relevant) == positive;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

}  // namespace pmr
