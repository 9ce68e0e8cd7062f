#include "pmr/optimizer.hpp"

#include <cmath>

#include "pmr/common.hpp"

namespace pmr {

std::string_view optimizer_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adagrad: return "adagrad";
    case OptimizerKind::adadelta: return "adadelta";
  }
  return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::adagrad, OptimizerKind::adadelta})
    if (optimizer_name(k) == name) return k;
  throw Error("unknown optimizer '" + std::string(name) + "' (expected sgd, adagrad or adadelta)");
}

namespace {

void check_sizes(std::span<double> w, std::span<const double> g, std::size_t expected) {
  if (w.size() != expected || g.size() != expected) throw Error("optimizer dimension mismatch");
}

}  // namespace

void Sgd::step(std::span<double> weights, std::span<const double> gradient) {
  check_sizes(weights, gradient, weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] -= learning_rate_ * gradient[i];
}

Adagrad::Adagrad(std::size_t dimension, double learning_rate, double epsilon)
    : learning_rate_(learning_rate), epsilon_(epsilon), sum_squared_(dimension, 0.0) {}

void Adagrad::step(std::span<double> weights, std::span<const double> gradient) {
  check_sizes(weights, gradient, sum_squared_.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double g = gradient[i];
    sum_squared_[i] += g * g;
    weights[i] -= learning_rate_ * g / (std::sqrt(sum_squared_[i]) + epsilon_);
  }
}

Adadelta::Adadelta(std::size_t dimension, double learning_rate, double rho, double epsilon)
    : learning_rate_(learning_rate), rho_(rho), epsilon_(epsilon), mean_sq_grad_(dimension, 0.0),
      mean_sq_delta_(dimension, 0.0) {}

void Adadelta::step(std::span<double> weights, std::span<const double> gradient) {
  check_sizes(weights, gradient, mean_sq_grad_.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double g = gradient[i];
    mean_sq_grad_[i] = rho_ * mean_sq_grad_[i] + (1.0 - rho_) * g * g;
    const double delta = std::sqrt(mean_sq_delta_[i] + epsilon_) / std::sqrt(mean_sq_grad_[i] + epsilon_) * g;
    mean_sq_delta_[i] = rho_ * mean_sq_delta_[i] + (1.0 - rho_) * delta * delta;
    weights[i] -= learning_rate_ * delta;
  }
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerSettings& s, std::size_t dimension) {
  switch (s.kind) {
    case OptimizerKind::sgd: return std::make_unique<Sgd>(s.learning_rate);
    case OptimizerKind::adagrad: return std::make_unique<Adagrad>(dimension, s.learning_rate, s.adagrad_epsilon);
    case OptimizerKind::adadelta: return std::make_unique<Adadelta>(dimension, s.learning_rate, s.rho, s.adadelta_epsilon);
  }
  throw Error("unknown optimizer");
}

}  // namespace pmr
