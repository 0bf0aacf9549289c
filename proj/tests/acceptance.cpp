// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dimtrunc/dimtrunc.hpp"

using namespace dimtrunc;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig desk_config() {
  ExperimentConfig c;
  c.mesh_m = 16;
  c.n_nodes = std::uint64_t{1} << 13;
  c.s_ref = 512;
  c.s_list = {4, 8, 16, 32, 64, 128, 256};
  c.seed = 1;
  c.transform = Transform(TransformKind::periodic);
  c.quantities = {Quantity::full_solution, Quantity::qoi_nl};
  return c;
}

constexpr std::size_t kTopFourMin = 32;

void print_table(const ErrorTable& t) {
  std::printf("  %s theta=%s transform=%s:", t.meta("quantity").value_or("?").c_str(),
              t.meta("theta").value_or("?").c_str(), t.meta("transform").value_or("?").c_str());
  for (const auto& r : t.rows) std::printf(" s=%zu:%.4e", r.s, r.error);
  std::printf("\n");
}

// L2 error of the P1 solution against sin(pi x1) sin(pi x2), integrated with
// the centroid rule on an 8x refinement of every element.
double manufactured_l2_error(std::size_t m) {
  const auto mesh = build_unit_square_mesh(m);
  auto exact = [](const Point& x) { return std::sin(pi * x.x1) * std::sin(pi * x.x2); };
  const auto u = solve(assemble_system(
      mesh, [](const Point&) { return 1.0; },
      [&](const Point& x) { return 2.0 * pi * pi * exact(x); }));
  const int r = 8;
  double total = 0.0;
  for (const Triangle& t : mesh->triangles()) {
    const auto v = mesh->vertices();
    const double area = mesh->signed_area(t);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r - i; ++j)
        for (int up = 0; up < 2; ++up) {
          if (up && i + j == r - 1) continue;
          const double o = up ? 2.0 / 3.0 : 1.0 / 3.0;
          const double l1 = (i + o) / r, l2 = (j + o) / r, l0 = 1.0 - l1 - l2;
          const Point x{l0 * v[t[0]].x1 + l1 * v[t[1]].x1 + l2 * v[t[2]].x1,
                        l0 * v[t[0]].x2 + l1 * v[t[1]].x2 + l2 * v[t[2]].x2};
          const double e =
              l0 * u.values[t[0]] + l1 * u.values[t[1]] + l2 * u.values[t[2]] - exact(x);
          total += e * e * area / (r * r);
        }
  }
  return std::sqrt(total);
}

struct Check {
  std::string name;
  bool ok;
};

// Doubling n must move each estimate by less than the gap to the next s, and
// errors must not increase by more than twice that QMC noise proxy.
void lattice_stability_checks(const ExperimentConfig& base, const ErrorTable& coarse,
                              std::vector<Check>& checks) {
  ExperimentConfig c = base;
  c.theta_list = {2.0};
  c.quantities = {Quantity::full_solution};
  c.n_nodes = 2 * base.n_nodes;
  const ErrorTable fine = run(c).tables[0][0];
  const auto& e = coarse.rows;
  bool stable = true, monotone = true;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double noise = std::abs(fine.rows[i].error - e[i].error);
    const std::size_t nb = i + 1 < e.size() ? i + 1 : i - 1;
    const double gap = std::abs(e[i].error - e[nb].error);
    stable = stable && noise < gap;
    if (i > 0) {
      const double prev_noise = std::abs(fine.rows[i - 1].error - e[i - 1].error);
      monotone = monotone && e[i].error <= e[i - 1].error + 2.0 * std::max(noise, prev_noise);
    }
    std::printf("  theta=2 s=%zu n=%llu:%.6e n=%llu:%.6e\n", e[i].s,
                static_cast<unsigned long long>(base.n_nodes), e[i].error,
                static_cast<unsigned long long>(c.n_nodes), fine.rows[i].error);
  }
  checks.push_back({"n-doubling stability", stable});
  checks.push_back({"monotone truncation", monotone});
}

std::vector<Check> invariant_checks(const ExperimentConfig& base) {
  std::vector<Check> checks;
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);

  {  // periodic transform has zero mean
    const auto rule = gauss_legendre_rule(32);
    double mean = 0.0;
    for (double shift : {-0.25, 0.25})
      for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        mean += 0.5 * rule.weights[i] * Transform(TransformKind::periodic)(shift + 0.5 * rule.nodes[i]);
    checks.push_back({"periodic transform zero mean", std::abs(mean) <= 1e-12});
  }
  {  // Stechkin inequality for several sequences
    bool ok = true;
    for (double decay : {1.5, 2.0, 3.0}) {
      std::vector<double> b(100000);
      for (std::size_t j = 1; j <= b.size(); ++j) b[j - 1] = std::pow(double(j), -decay);
      const double p = summability_exponent(decay);
      for (std::size_t s : {1u, 10u, 100u, 1000u})
        ok = ok && tail_sum(b, s) <= stechkin_tail_bound(b, s, p);
    }
    checks.push_back({"Stechkin tail inequality", ok});
  }
  {  // truncate idempotence and commutation with the transform
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> y(1 + trial % 23);
      for (double& v : y) v = unif(rng);
      const std::size_t s = rng() % (y.size() + 1);
      const Transform t(TransformKind::periodic);
      ok = ok && truncate(truncate(y, s), s) == truncate(y, s) &&
           apply_transform(t, truncate(y, s)) == truncate(apply_transform(t, y), s);
    }
    checks.push_back({"truncate idempotence", ok});
  }
  {  // lattice node periodicity
    const auto z = load_generating_vector(base.lattice_file);
    const std::vector<std::uint64_t> head(z.begin(), z.begin() + 64);
    const auto rule = LatticeRule::make(head, base.lattice_n_max, 5);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      const std::uint64_t i = rng() % rule.n;
      ok = ok && generate_node(rule, i, 64) == generate_node(rule, i + rule.n, 64);
    }
    checks.push_back({"lattice node periodicity", ok});
  }
  {  // byte-identical run output across worker counts
    ExperimentConfig c = base;
    c.theta_list = {2.0};
    c.s_list = {4, 16, 64};
    c.s_ref = 128;
    c.mesh_m = 8;
    c.n_nodes = 256;
    c.workers = 1;
    const auto a = run(c);
    c.workers = 3;
    const auto b = run(c);
    bool ok = true;
    for (std::size_t q = 0; q < c.quantities.size(); ++q)
      ok = ok && to_csv(a.tables[0][q]) == to_csv(b.tables[0][q]);
    checks.push_back({"run determinism", ok});
  }
  {  // fit_rate exactness on power laws
    bool ok = true;
    for (double rate : {-1.0, -1.5, -2.5}) {
      ErrorTable t;
      for (std::size_t s = 2; s <= 512; s *= 2) t.rows.push_back({s, 0.7 * std::pow(double(s), rate)});
      ok = ok && std::abs(fit_rate(t, 2).slope - rate) <= 1e-12;
    }
    checks.push_back({"fit_rate exactness", ok});
  }
  return checks;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig config = desk_config();
  std::printf("desk-scale run: m=%zu n=%llu s_ref=%zu seed=%llu workers=%u\n", config.mesh_m,
              static_cast<unsigned long long>(config.n_nodes), config.s_ref,
              static_cast<unsigned long long>(config.seed), config.worker_count());

  // Criteria 1 and 2: periodic transform, all three decay values.
  RunResult periodic;
  try {
    periodic = run(config);
  } catch (const std::exception& e) {
    std::printf("run failed: %s\n", e.what());
    for (int id : {1, 2, 3}) report(id, false, "desk-scale run failed");
    periodic.tables.clear();
  }
  double periodic_slope_theta2 = std::nan("");
  if (!periodic.tables.empty()) {
    const double tol_full[] = {0.4, 0.4, 0.5};
    bool ok1 = true, ok2 = true;
    std::string msg1, msg2;
    for (std::size_t i = 0; i < config.theta_list.size(); ++i) {
      const double theta = config.theta_list[i];
      const double target = expected_rate(theta);
      for (const auto& t : periodic.tables[i]) print_table(t);
      const double full = fit_rate(periodic.tables[i][0], kTopFourMin).slope;
      const double qoi = fit_rate(periodic.tables[i][1], kTopFourMin).slope;
      if (theta == 2.0) periodic_slope_theta2 = full;
      ok1 = ok1 && std::abs(full - target) <= tol_full[i];
      ok2 = ok2 && std::abs(qoi - target) <= 0.5;
      msg1 += " theta=" + fmt(theta) + ":" + fmt(full) + "(target " + fmt(target) + ")";
      msg2 += " theta=" + fmt(theta) + ":" + fmt(qoi) + "(target " + fmt(target) + ")";
    }
    report(1, ok1, "full-solution slopes over s>=32:" + msg1);
    report(2, ok2, "QoI slopes over s>=32:" + msg2);
    std::printf("  elapsed %.1f s\n", elapsed(t0));

    // Criterion 3: identity transform at theta = 2.
    ExperimentConfig identity = config;
    identity.theta_list = {2.0};
    identity.transform = Transform(TransformKind::identity);
    identity.quantities = {Quantity::full_solution};
    try {
      const auto id = run(identity);
      print_table(id.tables[0][0]);
      const double slope = fit_rate(id.tables[0][0], kTopFourMin).slope;
      report(3, std::abs(slope - periodic_slope_theta2) <= 0.3,
             "theta=2 slopes identity " + fmt(slope) + " vs periodic " +
                 fmt(periodic_slope_theta2) + ", gap " + fmt(std::abs(slope - periodic_slope_theta2)));
    } catch (const std::exception& e) {
      report(3, false, std::string("identity run failed: ") + e.what());
    }
    std::printf("  elapsed %.1f s\n", elapsed(t0));
  }

  // Criteria 4 and 5: scalar oracle.
  try {
    const OracleCheckSpec spec;  // a0 = 1.5, b_j = 0.1 j^-2, identity, s' = 6, n_used = 2^14
    const auto t_oracle = std::chrono::steady_clock::now();
    const auto rep = oracle_check(spec);
    std::string msg;
    for (const auto& r : rep.rows)
      msg += " s=" + std::to_string(r.s) + ":" + fmt(100.0 * r.relative_gap, 3) + "%";
    report(4, rep.pass, "QMC vs tensor Gauss-Legendre relative gaps" + msg + " (" +
                            fmt(elapsed(t_oracle), 3) + " s)");

    const double p = summability_exponent(2.0);
    const TheoryParams params = certified_params(spec.model, p);
    bool dominates = true;
    std::string msg5;
    for (const auto& r : rep.rows) {
      const double bound = truncation_upper_bound(params, r.s);
      dominates = dominates && bound >= r.exact * r.exact;
      msg5 += " s=" + std::to_string(r.s) + ":" + fmt(bound / (r.exact * r.exact), 3);
    }
    double worst = 0.0;
    for (std::size_t s = 1; s <= 5; ++s) {
      const double a = truncation_bound_terms(params, s).first;
      const double b = truncation_bound_terms(params, 2 * s).first;
      worst = std::max(worst, std::abs(std::log(b / a) / std::log(2.0) - (1.0 - 2.0 / p)));
    }
    report(5, dominates && worst <= 1e-9,
           "bound / E*^2 ratios" + msg5 + "; first-term slope deviation " + fmt(worst, 3));
  } catch (const std::exception& e) {
    report(4, false, std::string("oracle check failed: ") + e.what());
    report(5, false, "not evaluated");
  }

  // Criterion 6: FEM order.
  {
    const double e8 = manufactured_l2_error(8), e16 = manufactured_l2_error(16),
                 e32 = manufactured_l2_error(32);
    ErrorTable t;
    t.rows = {{8, e8}, {16, e16}, {32, e32}};
    const double order = -fit_rate(t, 8).slope;
    report(6, std::abs(order - 2.0) <= 0.2,
           "L2 errors " + fmt(e8) + ", " + fmt(e16) + ", " + fmt(e32) + "; order " + fmt(order));
  }

  // Criterion 7: invariant suites.
  try {
    auto checks = invariant_checks(config);
    if (!periodic.tables.empty()) lattice_stability_checks(config, periodic.tables[1][0], checks);
    bool ok = true;
    std::string msg;
    for (const auto& c : checks) {
      ok = ok && c.ok;
      msg += (msg.empty() ? " " : ", ") + c.name + (c.ok ? " ok" : " FAILED");
    }
    report(7, ok, "invariants:" + msg);
  } catch (const std::exception& e) {
    report(7, false, std::string("invariant checks threw: ") + e.what());
  }

  std::printf("total elapsed %.1f s\n", elapsed(t0));
  return failures == 0 ? 0 : 1;
}
