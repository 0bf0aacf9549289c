#pragma once

// Brute-force reference for the truncation estimator: the scalar model
//   g(y) = 1 / (a0 + sum_j b_j xi(y_j)),
// whose L2 truncation error is integrated exactly (to quadrature accuracy)
// on a tensor Gauss-Legendre grid.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"
#include "dimtrunc/parallel.hpp"
#include "dimtrunc/quadrature.hpp"
#include "dimtrunc/random_field.hpp"
#include "dimtrunc/theory.hpp"

namespace dimtrunc {

inline constexpr std::size_t kOracleMaxDimension = 8;
/// Largest tensor grid the oracle evaluates (2^28 points).
inline constexpr std::uint64_t kOracleGridBudget = std::uint64_t{1} << 28;

struct ScalarModelSpec {
  double a0 = 1.5;
  std::vector<double> b;  // length s_ref
  Transform transform{TransformKind::identity};

  std::size_t dimension() const noexcept { return b.size(); }

  /// a0 - sup|xi| sum_j b_j, the smallest value the denominator can take.
  double denominator_min() const {
    double sum = 0.0;
    for (double v : b) sum += v;
    return a0 - transform.sup_abs() * sum;
  }

  void validate() const {
    if (!(a0 > 0.0)) throw ConfigError("scalar model needs a0 > 0");
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!(b[j] >= 0.0) || !std::isfinite(b[j]))
        throw ConfigError("scalar model coefficients must be finite and nonnegative");
      if (j > 0 && b[j] > b[j - 1])
        throw ConfigError("scalar model coefficients must be nonincreasing");
    }
    if (!(denominator_min() > 0.0))
      throw CoercivityError("scalar model denominator a0 - sup|xi| sum b_j = " +
                            std::to_string(denominator_min()) + " is not positive");
  }

  /// b_j = scale * j^-decay for j = 1..dimension.
  static ScalarModelSpec power_law(double a0, double scale, double decay, std::size_t dimension,
                                   Transform t = Transform(TransformKind::identity)) {
    ScalarModelSpec spec{a0, std::vector<double>(dimension), t};
    for (std::size_t j = 1; j <= dimension; ++j)
      spec.b[j - 1] = scale * std::pow(static_cast<double>(j), -decay);
    return spec;
  }
};

/// g(y) with y holding at least dimension() raw parameters.
inline double scalar_model(const ScalarModelSpec& spec, std::span<const double> y) {
  double denom = spec.a0;
  for (std::size_t j = 0; j < spec.b.size(); ++j) denom += spec.b[j] * spec.transform(y[j]);
  return 1.0 / denom;
}

/// The scalar model as a TruncationModel for the lattice estimator.
struct ScalarTruncationModel {
  using Element = double;
  const ScalarModelSpec* spec;

  double evaluate(std::size_t s, std::span<const double> y) const {
    double denom = spec->a0;
    for (std::size_t j = 0; j < s && j < spec->b.size(); ++j)
      denom += spec->b[j] * spec->transform(y[j]);
    return 1.0 / denom;
  }
  double squared_distance(double u, double v) const { return (u - v) * (u - v); }
};

/// Exact L2 truncation errors sqrt(E[(g - g_s)^2]) for every s in s_list,
/// integrated on the q^{s_ref} tensor Gauss-Legendre grid. Leading-coordinate
/// slices are summed in a fixed order.
inline std::vector<double> exact_l2_truncation_errors(const ScalarModelSpec& spec,
                                                      std::span<const std::size_t> s_list, int q,
                                                      unsigned workers = default_worker_count()) {
  spec.validate();
  const std::size_t dim = spec.dimension();
  if (dim > kOracleMaxDimension)
    throw ConfigError("oracle dimension " + std::to_string(dim) + " exceeds the cap of " +
                      std::to_string(kOracleMaxDimension) +
                      " (tensor grid would need q^" + std::to_string(dim) + " evaluations)");
  if (q < 8) throw ConfigError("oracle needs at least 8 points per dimension");
  const GaussRule rule = gauss_legendre_rule(q);
  const double grid = std::pow(static_cast<double>(q), static_cast<double>(dim));
  if (grid > static_cast<double>(kOracleGridBudget))
    throw ConfigError("oracle grid needs " + std::to_string(q) + "^" + std::to_string(dim) +
                      " = " + std::to_string(grid) + " evaluations, budget is " +
                      std::to_string(kOracleGridBudget));
  for (std::size_t s : s_list)
    if (s > dim) throw ConfigError("truncation dimension exceeds the oracle dimension");
  std::vector<double> out(s_list.size(), 0.0);
  if (dim == 0) return out;

  std::vector<double> xi(rule.nodes.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = spec.transform(rule.nodes[i]);
  const std::size_t nq = static_cast<std::size_t>(q);
  const std::size_t width = s_list.size();

  // One item per leading-coordinate node; each walks the remaining grid.
  const auto sums = parallel_block_sums(nq, width, workers, [&] {
    return [&, prefix = std::vector<double>(dim + 1), weight = std::vector<double>(dim + 1),
            idx = std::vector<std::size_t>(dim)](std::size_t i0, std::span<double> acc) mutable {
      std::fill(acc.begin(), acc.end(), 0.0);
      prefix[0] = spec.a0;
      weight[0] = 1.0;
      prefix[1] = prefix[0] + spec.b[0] * xi[i0];
      weight[1] = rule.weights[i0];
      std::fill(idx.begin(), idx.end(), 0);
      // Rebuild partial sums from level `from` to the leaf.
      auto fill = [&](std::size_t from) {
        for (std::size_t d = from; d < dim; ++d) {
          prefix[d + 1] = prefix[d] + spec.b[d] * xi[idx[d]];
          weight[d + 1] = weight[d] * rule.weights[idx[d]];
        }
      };
      fill(1);
      while (true) {
        const double full = 1.0 / prefix[dim];
        for (std::size_t k = 0; k < width; ++k) {
          const double diff = full - 1.0 / prefix[s_list[k]];
          acc[k] += weight[dim] * diff * diff;
        }
        std::size_t d = dim;
        bool wrapped = true;
        while (d > 1) {
          --d;
          if (++idx[d] < nq) {
            wrapped = false;
            break;
          }
          idx[d] = 0;
        }
        if (wrapped) break;
        fill(d);
      }
    };
  });
  for (std::size_t k = 0; k < width; ++k) out[k] = s_list[k] == dim ? 0.0 : std::sqrt(sums[k]);
  return out;
}

inline double exact_l2_truncation_error(const ScalarModelSpec& spec, std::size_t s, int q,
                                        unsigned workers = default_worker_count()) {
  const std::size_t one[] = {s};
  return exact_l2_truncation_errors(spec, one, q, workers)[0];
}

/// Regularity constants the scalar model provably satisfies on U:
/// |d^nu g| <= |nu|! (b / m)^nu / m with m = a0 - sum_j b_j / 2.
inline TheoryParams certified_params(const ScalarModelSpec& spec, double p) {
  spec.validate();
  double sum = 0.0;
  for (double v : spec.b) sum += v;
  const double m = spec.a0 - 0.5 * sum;
  if (!(m > 0.0))
    throw CoercivityError("scalar model is not bounded on the full parameter box");
  TheoryParams params;
  params.p = p;
  params.theta = TheoryParams::factorial_theta(1.0 / m, taylor_order(p) + 2);
  params.b.resize(spec.b.size());
  for (std::size_t j = 0; j < spec.b.size(); ++j) params.b[j] = spec.b[j] / m;
  params.c_mu = Transform(TransformKind::identity).moment_constant();
  params.c_xi = spec.transform.moment_constant();
  return params;
}

}  // namespace dimtrunc
