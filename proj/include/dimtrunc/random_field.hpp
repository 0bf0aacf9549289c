#pragma once

// Parametric diffusion coefficient
//   a(x, y) = a0 + sum_j xi(y_j) j^-decay sin(j pi x1) sin(j pi x2)
// with an identity or periodic parameter transform.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"
#include "dimtrunc/fem.hpp"

namespace dimtrunc {

enum class TransformKind { identity, periodic };

/// Univariate parameter map xi: [-1/2, 1/2] -> [-1/2, 1/2].
class Transform {
public:
  constexpr Transform(TransformKind kind = TransformKind::identity) : kind_(kind) {}

  static Transform from_string(const std::string& name) {
    if (name == "identity" || name == "affine") return Transform(TransformKind::identity);
    if (name == "periodic") return Transform(TransformKind::periodic);
    throw ConfigError("unknown transform '" + name + "' (expected identity or periodic)");
  }

  constexpr TransformKind kind() const noexcept { return kind_; }
  std::string name() const { return kind_ == TransformKind::identity ? "identity" : "periodic"; }

  double operator()(double y) const noexcept {
    if (kind_ == TransformKind::identity) return y;
    return std::sin(2.0 * std::numbers::pi * y) / std::sqrt(6.0);
  }

  /// sup |xi| over [-1/2, 1/2].
  double sup_abs() const noexcept {
    return kind_ == TransformKind::identity ? 0.5 : 1.0 / std::sqrt(6.0);
  }

  /// C such that the k-th absolute moment of xi(y), y uniform, is <= C for
  /// every k >= 2. Both maps attain their largest moment, 1/12, at k = 2.
  double moment_constant() const noexcept { return 1.0 / 12.0; }

  friend bool operator==(Transform a, Transform b) { return a.kind_ == b.kind_; }

private:
  TransformKind kind_;
};

inline std::vector<double> apply_transform(Transform t, std::span<const double> y) {
  std::vector<double> out;
  out.reserve(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!(std::abs(y[j]) <= 0.5))
      throw ConfigError("parameter component " + std::to_string(j + 1) + " = " +
                        std::to_string(y[j]) + " lies outside [-1/2, 1/2]");
    out.push_back(t(y[j]));
  }
  return out;
}

/// First s components of y, remaining components zeroed; length preserved.
inline std::vector<double> truncate(std::span<const double> y, std::size_t s) {
  if (s > y.size())
    throw ConfigError("truncation dimension " + std::to_string(s) + " exceeds vector length " +
                      std::to_string(y.size()));
  std::vector<double> out(y.begin(), y.end());
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(s), out.end(), 0.0);
  return out;
}

struct CoercivityBounds {
  double a_min = 0.0;
  double a_max = 0.0;
  /// Lower bound from the untruncated series (reported only).
  double a_min_infinite = 0.0;
};

struct DiffusionFieldSpec {
  double a0 = 1.5;
  double decay = 2.0;
  Transform transform{TransformKind::periodic};
  std::size_t max_modes = 2048;

  /// j^-decay, the sup norm of the j-th mode (1-based j).
  double mode_amplitude(std::size_t j) const {
    return std::pow(static_cast<double>(j), -decay);
  }
};

inline CoercivityBounds coercivity_bounds(const DiffusionFieldSpec& spec) {
  if (!(spec.decay > 1.0))
    throw ConfigError("decay must exceed 1 for the mode amplitudes to be summable, got " +
                      std::to_string(spec.decay));
  double sum = 0.0;
  for (std::size_t j = 1; j <= spec.max_modes; ++j) sum += spec.mode_amplitude(j);
  const double spread = spec.transform.sup_abs() * sum;
  CoercivityBounds b;
  b.a_min = spec.a0 - spread;
  b.a_max = spec.a0 + spread;
  b.a_min_infinite = spec.a0 - spec.transform.sup_abs() * std::riemann_zeta(spec.decay);
  if (!(b.a_min > 0.0))
    throw CoercivityError("coefficient not uniformly positive: a0 - sup|xi| * sum_{j<=" +
                          std::to_string(spec.max_modes) + "} j^-" + std::to_string(spec.decay) +
                          " = " + std::to_string(spec.a0) + " - " + std::to_string(spread) +
                          " <= 0");
  return b;
}

/// b_j = ||psi_j||_inf / a_min = j^-decay / a_min for j = 1..count.
inline std::vector<double> b_sequence(const DiffusionFieldSpec& spec, std::size_t count) {
  const double a_min = coercivity_bounds(spec).a_min;
  std::vector<double> b(count);
  for (std::size_t j = 1; j <= count; ++j) b[j - 1] = spec.mode_amplitude(j) / a_min;
  return b;
}

/// a(x, y) with y holding the first s raw parameters (xi applied here).
inline double eval_coefficient(const DiffusionFieldSpec& spec, std::span<const double> y,
                               const Point& x) {
  if (y.size() > spec.max_modes)
    throw ConfigError("parameter dimension " + std::to_string(y.size()) + " exceeds max_modes " +
                      std::to_string(spec.max_modes));
  double a = spec.a0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double jd = static_cast<double>(j);
    a += spec.transform(y[j - 1]) * spec.mode_amplitude(j) * std::sin(jd * std::numbers::pi * x.x1) *
         std::sin(jd * std::numbers::pi * x.x2);
  }
  return a;
}

/// Unscaled mode shapes sin(j pi x1) sin(j pi x2), j = 1..modes, sampled at a
/// fixed point set. Row j-1 is contiguous over the points.
class ModeTable {
public:
  ModeTable(std::span<const Point> points, std::size_t modes)
      : points_(points.size()), modes_(modes), values_(points.size() * modes) {
    for (std::size_t j = 1; j <= modes; ++j) {
      const double w = static_cast<double>(j) * std::numbers::pi;
      double* row = values_.data() + (j - 1) * points_;
      for (std::size_t p = 0; p < points_; ++p)
        row[p] = std::sin(w * points[p].x1) * std::sin(w * points[p].x2);
    }
  }

  std::size_t points() const noexcept { return points_; }
  std::size_t modes() const noexcept { return modes_; }
  std::span<const double> mode(std::size_t j) const {
    return {values_.data() + (j - 1) * points_, points_};
  }

private:
  std::size_t points_;
  std::size_t modes_;
  std::vector<double> values_;
};

/// Incremental evaluation of a(., y) at the table points for increasing
/// truncation dimensions. Terms are added one mode at a time in index
/// order, so the values after advance_to(s) do not depend on which
/// intermediate dimensions were visited.
class CoefficientSweep {
public:
  CoefficientSweep(const ModeTable& table, const DiffusionFieldSpec& spec)
      : table_(&table), spec_(spec), values_(table.points()) {
    amplitude_.resize(table.modes());
    for (std::size_t j = 1; j <= table.modes(); ++j) amplitude_[j - 1] = spec.mode_amplitude(j);
  }

  /// Start a new parameter vector; xi_y holds the transformed parameters.
  void reset(std::span<const double> xi_y) {
    xi_y_ = xi_y;
    std::fill(values_.begin(), values_.end(), spec_.a0);
    current_ = 0;
  }

  std::span<const double> advance_to(std::size_t s) {
    if (s < current_) throw ConfigError("coefficient sweep dimensions must be nondecreasing");
    if (s > table_->modes() || s > xi_y_.size())
      throw ConfigError("truncation dimension " + std::to_string(s) + " exceeds available modes");
    for (std::size_t j = current_ + 1; j <= s; ++j) {
      const double c = xi_y_[j - 1] * amplitude_[j - 1];
      if (c == 0.0) continue;
      const auto row = table_->mode(j);
      for (std::size_t p = 0; p < values_.size(); ++p) values_[p] += c * row[p];
    }
    current_ = s;
    return values_;
  }

  std::size_t dimension() const noexcept { return current_; }

private:
  const ModeTable* table_;
  DiffusionFieldSpec spec_;
  std::vector<double> amplitude_;
  std::vector<double> values_;
  std::span<const double> xi_y_;
  std::size_t current_ = 0;
};

}  // namespace dimtrunc
