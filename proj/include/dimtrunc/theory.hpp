#pragma once

// Predicted dimension-truncation rates and closed-form bounds.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"

namespace dimtrunc {

/// Rate of the L2 truncation error for b_j ~ j^-decay: s^(1/2 - decay).
inline double expected_rate(double decay) {
  if (!(decay > 1.0))
    throw ConfigError("decay " + std::to_string(decay) +
                      " <= 1: b_j = j^-decay is not in l^p for any p < 1");
  return 0.5 - decay;
}

/// k = ceil(1 / (1 - p)).
inline int taylor_order(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("summability exponent p must lie in (0, 1), got " + std::to_string(p));
  // 1 / (1 - 0.9) evaluates to 10.000000000000002; snap near-integers first.
  const double x = 1.0 / (1.0 - p);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * nearest) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(x));
}

inline constexpr double kSummabilityMargin = 1e-3;

/// Smallest admissible exponent used for a power-law sequence j^-decay.
inline double summability_exponent(double decay, double margin = kSummabilityMargin) {
  expected_rate(decay);
  const double p = 1.0 / decay + margin;
  if (!(p < 1.0)) throw ConfigError("decay too close to 1 for the chosen summability margin");
  return p;
}

namespace detail {
inline void require_nonincreasing(std::span<const double> b) {
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!(b[j] >= 0.0)) throw ConfigError("sequence b must be nonnegative");
    if (j > 0 && b[j] > b[j - 1])
      throw ConfigError("sequence b must be nonincreasing (b_" + std::to_string(j + 1) +
                        " > b_" + std::to_string(j) + ")");
  }
}
}  // namespace detail

/// l^p quasi-norm (sum b_j^p)^(1/p) of the stored finite vector.
inline double lp_norm(std::span<const double> b, double p) {
  double sum = 0.0;
  for (double v : b) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

/// Exact finite tail sum_{j > s} b_j^power (1-based j).
inline double tail_sum(std::span<const double> b, std::size_t s, double power = 1.0) {
  detail::require_nonincreasing(b);
  double sum = 0.0;
  for (std::size_t j = s; j < b.size(); ++j) sum += std::pow(b[j], power);
  return sum;
}

/// Stechkin: sum_{j > s} b_j <= s^(1 - 1/p) ||b||_p.
inline double stechkin_tail_bound(std::span<const double> b, std::size_t s, double p) {
  detail::require_nonincreasing(b);
  if (!(p > 0.0 && p < 1.0))
    throw ConfigError("summability exponent p must lie in (0, 1), got " + std::to_string(p));
  if (s < 1) throw ConfigError("Stechkin bound needs s >= 1");
  return std::pow(static_cast<double>(s), 1.0 - 1.0 / p) * lp_norm(b, p);
}

enum class MomentSource { mu, xi };

/// Constants of the parametric regularity assumption:
///   ||d^nu g(y)|| <= theta[|nu|] b^nu for |nu| <= k + 1,
/// together with the moment constants of the parameter law (c_mu) and of
/// the transformed variable (c_xi).
struct TheoryParams {
  std::vector<double> theta;  // theta[l], l = 0..k+1
  std::vector<double> b;
  double p = 0.5;
  double c_mu = 1.0 / 12.0;
  double c_xi = 1.0 / 12.0;

  int k() const { return taylor_order(p); }

  void validate() const {
    const int order = k();
    if (theta.size() < static_cast<std::size_t>(order) + 2)
      throw ConfigError("theta needs k + 2 = " + std::to_string(order + 2) + " entries, got " +
                        std::to_string(theta.size()));
    for (double t : theta)
      if (!(t >= 0.0)) throw ConfigError("theta entries must be nonnegative");
    detail::require_nonincreasing(b);
    if (!(c_mu >= 0.0) || !(c_xi >= 0.0))
      throw ConfigError("moment constants must be nonnegative");
    if (!std::isfinite(lp_norm(b, p))) throw ConfigError("b has infinite l^p quasi-norm");
  }

  double moment(MomentSource which) const { return which == MomentSource::mu ? c_mu : c_xi; }

  /// theta_l = l! * c, the affine-PDE form of the regularity bound.
  static std::vector<double> factorial_theta(double c, int count) {
    std::vector<double> t(count);
    double f = 1.0;
    for (int l = 0; l < count; ++l) {
      if (l > 0) f *= l;
      t[l] = f * c;
    }
    return t;
  }
};

namespace detail {
/// log of max_{0 <= l <= top} 2 theta_l / l!  (-inf when all vanish).
inline double log_max_scaled_theta(std::span<const double> theta, int top) {
  double best = -std::numeric_limits<double>::infinity();
  for (int l = 0; l <= top; ++l) {
    if (theta[l] <= 0.0) continue;
    best = std::max(best, std::log(2.0 * theta[l]) - std::lgamma(l + 1.0));
  }
  return best;
}

inline double checked_exp(double log_value, const char* what) {
  if (log_value > std::log(std::numeric_limits<double>::max()))
    throw RangeError(std::string(what) + " overflows a double (log value " +
                     std::to_string(log_value) + ")");
  return std::exp(log_value);
}
}  // namespace detail

/// (max_{l <= |nu|} 2 theta_l / l!)^2 (|nu| + 1)! b^nu for a multi-index nu
/// given densely (nu[j] is the order in coordinate j + 1).
inline double regularity_bound(const TheoryParams& params, std::span<const unsigned> nu) {
  const int k = params.k();
  int order = 0;
  for (unsigned v : nu) order += static_cast<int>(v);
  if (order > k + 1)
    throw ConfigError("|nu| = " + std::to_string(order) + " exceeds k + 1 = " +
                      std::to_string(k + 1));
  if (params.theta.size() < static_cast<std::size_t>(order) + 1)
    throw ConfigError("theta too short for |nu| = " + std::to_string(order));
  double b_power = 1.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (nu[j] == 0) continue;
    const double bj = j < params.b.size() ? params.b[j] : 0.0;
    b_power *= std::pow(bj, static_cast<double>(nu[j]));
  }
  const double log_m = detail::log_max_scaled_theta(params.theta, order);
  if (!std::isfinite(log_m) || b_power == 0.0) return 0.0;
  double factorial = 1.0;
  for (int i = 2; i <= order + 1; ++i) factorial *= i;
  const double m = std::exp(log_m);
  return m * m * factorial * b_power;
}

/// The two terms of the closed-form bound on the squared L2 truncation error:
///   first  = C^k (max_{l<=k} 2 theta_l/l!)^2 (k+1)! s^(1-2/p) (exp(beta_k ||b||_p^2) - 1)
///   second = C^(k+1) (max_{l<=k+1} 2 theta_l/l!)^2 (k+2)! (s^(1-1/p) ||b||_p)^(k+1)
/// with beta_k = sum_{l=0}^{k-2} b_1^l and C the selected moment constant.
struct TruncationBound {
  double first = 0.0;
  double second = 0.0;
  double total() const { return first + second; }
};

/// Natural logs of the two terms; -inf for a vanishing term. Finite even
/// when the terms themselves overflow a double.
struct LogTruncationBound {
  double first = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  double total() const {
    const double hi = std::max(first, second), lo = std::min(first, second);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(lo - hi));
  }
};

inline LogTruncationBound log_truncation_bound_terms(const TheoryParams& params, std::size_t s,
                                                     MomentSource which = MomentSource::mu) {
  params.validate();
  if (s < 1) throw ConfigError("truncation bound needs s >= 1");
  const int k = params.k();
  const double p = params.p;
  const double norm = lp_norm(params.b, p);
  const double c = params.moment(which);
  LogTruncationBound out;
  if (norm == 0.0 || c == 0.0) return out;
  const double log_s = std::log(static_cast<double>(s));
  const double log_c = std::log(c);

  const double b1 = params.b.empty() ? 0.0 : params.b.front();
  double beta = 0.0;
  for (int l = 0; l <= k - 2; ++l) beta += std::pow(b1, l);
  const double x = beta * norm * norm;
  if (x > 0.0) {
    // log(exp(x) - 1), stable for small and large x
    const double log_expm1 = x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
    const double log_m = detail::log_max_scaled_theta(params.theta, k);
    if (std::isfinite(log_m))
      out.first = k * log_c + 2.0 * log_m + std::lgamma(k + 2.0) + (1.0 - 2.0 / p) * log_s +
                  log_expm1;
  }
  const double log_m1 = detail::log_max_scaled_theta(params.theta, k + 1);
  if (std::isfinite(log_m1)) {
    const double log_tail = (1.0 - 1.0 / p) * log_s + std::log(norm);
    out.second = (k + 1) * log_c + 2.0 * log_m1 + std::lgamma(k + 3.0) + (k + 1) * log_tail;
  }
  return out;
}

inline TruncationBound truncation_bound_terms(const TheoryParams& params, std::size_t s,
                                              MomentSource which = MomentSource::mu) {
  const LogTruncationBound logs = log_truncation_bound_terms(params, s, which);
  return {detail::checked_exp(logs.first, "first truncation bound term"),
          detail::checked_exp(logs.second, "second truncation bound term")};
}

/// Upper bound on the squared L2 truncation error at dimension s.
inline double truncation_upper_bound(const TheoryParams& params, std::size_t s,
                                     MomentSource which = MomentSource::mu) {
  return truncation_bound_terms(params, s, which).total();
}

}  // namespace dimtrunc
