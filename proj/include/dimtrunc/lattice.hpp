#pragma once

// Randomly shifted rank-1 lattice rules on [-1/2, 1/2]^s.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "dimtrunc/error.hpp"
#include "dimtrunc/parallel.hpp"
#include "dimtrunc/random_field.hpp"

namespace dimtrunc {

/// Generating vector from text: either one z_j per line or two columns
/// "j z_j" with strictly increasing j. Blank lines and '#' comments are
/// skipped.
inline std::vector<std::uint64_t> parse_generating_vector(std::string_view text) {
  std::vector<std::uint64_t> z;
  int columns = 0;
  long long last_index = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() > 2) throw ParseError("expected one or two columns", line_no);
    const int cols = static_cast<int>(tokens.size());
    if (columns == 0) columns = cols;
    if (cols != columns) throw ParseError("inconsistent column count", line_no);

    std::vector<unsigned long long> values;
    for (const auto& tok : tokens) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        if (tok.front() == '-') throw std::invalid_argument("negative");
        v = std::stoull(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("not a nonnegative integer: '" + tok + "'", line_no);
      }
      if (used != tok.size()) throw ParseError("not an integer: '" + tok + "'", line_no);
      values.push_back(v);
    }
    if (columns == 2) {
      const auto index = static_cast<long long>(values[0]);
      if (index <= last_index)
        throw ParseError("dimension index column must be strictly increasing", line_no);
      last_index = index;
      z.push_back(values[1]);
    } else {
      z.push_back(values[0]);
    }
  }
  if (z.empty()) throw ParseError("generating vector is empty", line_no);
  return z;
}

inline std::vector<std::uint64_t> load_generating_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read generating vector file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_generating_vector(buf.str());
}

/// SplitMix64: fixed, documented generator behind every random shift.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

/// Shift vector in [0,1)^s; component j is the j-th SplitMix64 draw.
inline std::vector<double> draw_shift(std::uint64_t seed, std::size_t s) {
  SplitMix64 rng(seed);
  std::vector<double> shift(s);
  for (double& d : shift) d = rng.uniform();
  return shift;
}

/// Seed of the r-th independent shift derived from a base seed (r = 0 is the
/// base seed itself).
inline std::uint64_t shift_seed(std::uint64_t seed, std::size_t r) {
  if (r == 0) return seed;
  SplitMix64 rng(seed ^ (0xd1b54a32d192ed03ULL * r));
  return rng.next();
}

inline bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct LatticeRule {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> z;  // reduced mod n
  std::vector<double> shift;     // one component per dimension of z
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  /// Rule with z reduced mod n and a shift drawn from seed. Use
  /// with_shift for an explicit (e.g. zero) shift.
  static LatticeRule make(std::span<const std::uint64_t> z_raw, std::uint64_t n,
                          std::uint64_t seed) {
    if (!is_power_of_two(n) || n > (std::uint64_t{1} << 20))
      throw ConfigError("lattice size must be a power of two not exceeding 2^20, got " +
                        std::to_string(n));
    LatticeRule rule;
    rule.n = n;
    rule.seed = seed;
    rule.z.reserve(z_raw.size());
    for (std::size_t j = 0; j < z_raw.size(); ++j) {
      const std::uint64_t zj = z_raw[j] % n;
      if (zj == 0 && n > 1)
        throw ConfigError("generating vector component " + std::to_string(j + 1) +
                          " is divisible by n = " + std::to_string(n));
      rule.z.push_back(zj);
    }
    if (!z_raw.empty() && z_raw[0] != 1)
      rule.warnings.push_back("first generating vector component is " +
                              std::to_string(z_raw[0]) + ", expected 1");
    rule.shift = draw_shift(seed, rule.z.size());
    return rule;
  }

  std::size_t dimension() const noexcept { return z.size(); }

  LatticeRule with_shift(std::vector<double> s) const {
    LatticeRule r = *this;
    r.shift = std::move(s);
    r.shift.resize(z.size(), 0.0);
    return r;
  }
};

namespace detail {
__extension__ using uint128 = unsigned __int128;
}  // namespace detail

/// Node i of the shifted rule in [-1/2, 1/2]^s:
/// frac(i z_j / n + shift_j) - 1/2, with i z_j mod n in exact integer math.
inline void generate_node(const LatticeRule& rule, std::uint64_t i, std::size_t s,
                          std::span<double> out) {
  if (s > rule.z.size())
    throw ConfigError("dimension " + std::to_string(s) + " exceeds generating vector length " +
                      std::to_string(rule.z.size()));
  const auto n = static_cast<detail::uint128>(rule.n);
  const double inv_n = 1.0 / static_cast<double>(rule.n);
  for (std::size_t j = 0; j < s; ++j) {
    const auto r = static_cast<std::uint64_t>((static_cast<detail::uint128>(i % rule.n) *
                                               rule.z[j]) % n);
    double x = static_cast<double>(r) * inv_n + rule.shift[j];
    x -= std::floor(x);
    out[j] = x - 0.5;
  }
}

inline std::vector<double> generate_node(const LatticeRule& rule, std::uint64_t i, std::size_t s) {
  std::vector<double> out(s);
  generate_node(rule, i, s, out);
  return out;
}

/// Node k of the embedded sub-rule with n_used points. For an extensible
/// (embedded) generating vector these are the nodes frac(k z / n_used),
/// i.e. every (n / n_used)-th node of the full rule.
inline void embedded_node(const LatticeRule& rule, std::uint64_t n_used, std::uint64_t k,
                          std::size_t s, std::span<double> out) {
  generate_node(rule, k * (rule.n / n_used), s, out);
}

inline void check_budget(const LatticeRule& rule, std::uint64_t n_used) {
  if (!is_power_of_two(n_used) || n_used > rule.n)
    throw ConfigError("n_used must be a power of two not exceeding n = " +
                      std::to_string(rule.n) + ", got " + std::to_string(n_used));
}

/// Equal-weight lattice average of f over n_used nodes with a
/// deterministic reduction order.
inline double qmc_mean(const std::function<double(std::span<const double>)>& f,
                       const LatticeRule& rule, std::size_t s, std::uint64_t n_used,
                       unsigned workers = default_worker_count()) {
  check_budget(rule, n_used);
  const auto sum = parallel_block_sums(n_used, 1, workers, [&] {
    return [&, y = std::vector<double>(s)](std::size_t k, std::span<double> out) mutable {
      embedded_node(rule, n_used, k, s, y);
      const double v = f(y);
      if (!std::isfinite(v))
        throw NumericalError("integrand is not finite at lattice node " + std::to_string(k));
      out[0] = v;
    };
  });
  return sum[0] / static_cast<double>(n_used);
}

/// A parametric model for the truncation estimator: evaluate(s, y) returns
/// the element g_s(y) for a full parameter vector y (components beyond s
/// are ignored by the model), and squared_distance measures ||u - v||^2.
template <class M>
concept TruncationModel = requires(M m, std::size_t s, std::span<const double> y,
                                   const typename M::Element& u) {
  { m.evaluate(s, y) } -> std::convertible_to<typename M::Element>;
  { m.squared_distance(u, u) } -> std::convertible_to<double>;
};

/// sqrt of the lattice mean of ||g_{s_ref}(y) - g_s(y)||^2 for each s in
/// s_list. The reference element is computed once per node and shared by
/// all s. make_model() is called once per worker.
template <class MakeModel>
std::vector<double> estimate_truncation_errors(MakeModel&& make_model,
                                               std::span<const std::size_t> s_list,
                                               std::size_t s_ref, const LatticeRule& rule,
                                               std::uint64_t n_used,
                                               unsigned workers = default_worker_count()) {
  static_assert(TruncationModel<std::invoke_result_t<MakeModel&>>);
  check_budget(rule, n_used);
  if (s_ref > rule.dimension())
    throw ConfigError("reference dimension " + std::to_string(s_ref) +
                      " exceeds generating vector length " + std::to_string(rule.dimension()));
  for (std::size_t s : s_list)
    if (s > s_ref) throw ConfigError("truncation dimension exceeds reference dimension");
  const auto sums = parallel_block_sums(n_used, s_list.size(), workers, [&] {
    return [&, model = make_model(), y = std::vector<double>(s_ref)](
               std::size_t k, std::span<double> out) mutable {
      embedded_node(rule, n_used, k, s_ref, y);
      const auto reference = model.evaluate(s_ref, y);
      for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (s_list[i] == s_ref) {
          out[i] = 0.0;
          continue;
        }
        const double d = model.squared_distance(reference, model.evaluate(s_list[i], y));
        if (!std::isfinite(d))
          throw NumericalError("model distance is not finite at lattice node " +
                               std::to_string(k));
        out[i] = d;
      }
    };
  });
  std::vector<double> errors(s_list.size());
  for (std::size_t i = 0; i < errors.size(); ++i)
    errors[i] = std::sqrt(sums[i] / static_cast<double>(n_used));
  return errors;
}

template <class MakeModel>
double estimate_truncation_error(MakeModel&& make_model, std::size_t s, std::size_t s_ref,
                                 const LatticeRule& rule, std::uint64_t n_used,
                                 unsigned workers = default_worker_count()) {
  const std::size_t one[] = {s};
  return estimate_truncation_errors(std::forward<MakeModel>(make_model), one, s_ref, rule, n_used,
                                    workers)[0];
}

}  // namespace dimtrunc
