#pragma once

// Straight-line reimplementations of the three update rules, written from
// their published recurrences. One scalar loop per weight, no shared code
// with the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace pmr::oracle {

struct Trajectory {
  std::vector<std::vector<double>> weights;  // after each step
  std::vector<std::vector<double>> acc1;     // adagrad G, adadelta E[g^2]
  std::vector<std::vector<double>> acc2;     // adadelta E[dx^2]
};

inline Trajectory sgd_reference(const std::vector<std::vector<double>>& grads, double lr) {
  Trajectory t;
  std::vector<double> w(grads.empty() ? 0 : grads[0].size(), 0.0);
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - lr * g[i];
    t.weights.push_back(w);
  }
  return t;
}

// Duchi et al.: G_t = G_{t-1} + g_t^2, w_t = w_{t-1} - lr g_t / (sqrt(G_t) + eps)
inline Trajectory adagrad_reference(const std::vector<std::vector<double>>& grads, double lr, double eps) {
  Trajectory t;
  const std::size_t n = grads.empty() ? 0 : grads[0].size();
  std::vector<double> w(n, 0.0), G(n, 0.0);
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < n; ++i) {
      G[i] = G[i] + g[i] * g[i];
      w[i] = w[i] - lr * g[i] / (std::sqrt(G[i]) + eps);
    }
    t.weights.push_back(w);
    t.acc1.push_back(G);
  }
  return t;
}

// Zeiler: E[g^2]_t = rho E[g^2]_{t-1} + (1-rho) g_t^2
//         dx_t = -(RMS[dx]_{t-1} / RMS[g]_t) g_t,  RMS[v] = sqrt(E[v^2] + eps)
//         E[dx^2]_t = rho E[dx^2]_{t-1} + (1-rho) dx_t^2
//         w_t = w_{t-1} + lr dx_t
inline Trajectory adadelta_reference(const std::vector<std::vector<double>>& grads, double lr, double rho,
                                     double eps) {
  Trajectory t;
  const std::size_t n = grads.empty() ? 0 : grads[0].size();
  std::vector<double> w(n, 0.0), Eg(n, 0.0), Edx(n, 0.0);
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < n; ++i) {
      Eg[i] = rho * Eg[i] + (1 - rho) * g[i] * g[i];
      const double rms_dx = std::sqrt(Edx[i] + eps);
      const double rms_g = std::sqrt(Eg[i] + eps);
      const double dx = -(rms_dx / rms_g) * g[i];
      Edx[i] = rho * Edx[i] + (1 - rho) * dx * dx;
      w[i] = w[i] + lr * dx;
    }
    t.weights.push_back(w);
    t.acc1.push_back(Eg);
    t.acc2.push_back(Edx);
  }
  return t;
}

}  // namespace pmr::oracle
