#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace pmr {

enum class OptimizerKind { sgd, adagrad, adadelta };

std::string_view optimizer_name(OptimizerKind kind);
/// Throws pmr::Error for unknown names.
OptimizerKind parse_optimizer(std::string_view name);

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::adadelta;
  double learning_rate = 0.01;
  double rho = 0.95;               // adadelta decay
  double adadelta_epsilon = 1e-6;
  double adagrad_epsilon = 1e-8;
};

/// Per-weight first-order update rule. step() applies one update for the
/// gradient of the loss w.r.t. the weights.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void step(std::span<double> weights, std::span<const double> gradient) = 0;
  virtual OptimizerKind kind() const = 0;
};

/// w <- w - lr * g
class Sgd final : public Optimizer {
 public:
  explicit Sgd(double learning_rate) : learning_rate_(learning_rate) {}
  void step(std::span<double> weights, std::span<const double> gradient) override;
  OptimizerKind kind() const override { return OptimizerKind::sgd; }

 private:
  double learning_rate_;
};

/// G <- G + g^2;  w <- w - lr * g / (sqrt(G) + eps)
class Adagrad final : public Optimizer {
 public:
  Adagrad(std::size_t dimension, double learning_rate, double epsilon);
  void step(std::span<double> weights, std::span<const double> gradient) override;
  OptimizerKind kind() const override { return OptimizerKind::adagrad; }

  std::span<const double> squared_gradients() const { return sum_squared_; }

 private:
  double learning_rate_;
  double epsilon_;
  std::vector<double> sum_squared_;
};

/// E[g^2] <- rho E[g^2] + (1 - rho) g^2
/// d      <- sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
/// E[dx^2] <- rho E[dx^2] + (1 - rho) d^2
/// w      <- w - lr * d
class Adadelta final : public Optimizer {
 public:
  Adadelta(std::size_t dimension, double learning_rate, double rho, double epsilon);
  void step(std::span<double> weights, std::span<const double> gradient) override;
  OptimizerKind kind() const override { return OptimizerKind::adadelta; }

  std::span<const double> mean_squared_gradients() const { return mean_sq_grad_; }
  std::span<const double> mean_squared_updates() const { return mean_sq_delta_; }

 private:
  double learning_rate_;
  double rho_;
  double epsilon_;
  std::vector<double> mean_sq_grad_;
  std::vector<double> mean_sq_delta_;
};

std::unique_ptr<Optimizer> make_optimizer(const OptimizerSettings& settings, std::size_t dimension);

}  // namespace pmr
