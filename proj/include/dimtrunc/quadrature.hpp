#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"

namespace dimtrunc {

/// Nodes and weights of a one-dimensional rule for the uniform probability
/// measure on [-1/2, 1/2]; the weights sum to one.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// q-point Gauss-Legendre rule mapped from [-1, 1] to [-1/2, 1/2].
inline GaussRule gauss_legendre_rule(int q) {
  if (q < 1 || q > 32)
    throw ConfigError("Gauss-Legendre rule needs 1 <= q <= 32, got " + std::to_string(q));
  GaussRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_q from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pq = q == 1 ? x : p1;
      const double pqm1 = q == 1 ? 1.0 : p0;
      dp = q * (x * pq - pqm1) / (x * x - 1.0);
      const double dx = pq / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (q == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = q == 1 ? 2.0 : 2.0 / ((1.0 - x * x) * dp * dp);
    // Descending order on [-1,1]: node i is +x, node q-1-i is -x.
    rule.nodes[q - 1 - i] = 0.5 * x;
    rule.nodes[i] = -0.5 * x;
    rule.weights[i] = rule.weights[q - 1 - i] = 0.5 * w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

}  // namespace dimtrunc
