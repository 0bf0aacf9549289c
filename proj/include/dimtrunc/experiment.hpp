#pragma once

// Experiment orchestration: truncation-error sweeps of the parametric
// diffusion problem, theory predictions, and the scalar oracle check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dimtrunc/error.hpp"
#include "dimtrunc/error_table.hpp"
#include "dimtrunc/fem.hpp"
#include "dimtrunc/lattice.hpp"
#include "dimtrunc/oracle.hpp"
#include "dimtrunc/parallel.hpp"
#include "dimtrunc/random_field.hpp"
#include "dimtrunc/theory.hpp"

#ifndef DIMTRUNC_DEFAULT_LATTICE
#define DIMTRUNC_DEFAULT_LATTICE "data/lattice-embedded-b2-1024-1048576.3600.txt"
#endif

namespace dimtrunc {

enum class Quantity { full_solution, qoi_nl };

inline const char* to_string(Quantity q) {
  return q == Quantity::full_solution ? "full_solution" : "qoi_nl";
}

inline Quantity quantity_from_string(const std::string& s) {
  if (s == "full_solution") return Quantity::full_solution;
  if (s == "qoi_nl") return Quantity::qoi_nl;
  throw ConfigError("unknown quantity '" + s + "' (expected full_solution or qoi_nl)");
}

struct ExperimentConfig {
  std::vector<double> theta_list{1.5, 2.0, 3.0};
  std::vector<std::size_t> s_list{2, 4, 8, 16, 32, 64, 128, 256};
  std::size_t s_ref = 512;
  std::size_t mesh_m = 16;
  std::uint64_t n_nodes = std::uint64_t{1} << 13;
  std::uint64_t seed = 1;
  Transform transform{TransformKind::periodic};
  std::vector<Quantity> quantities{Quantity::full_solution};
  Norm norm = Norm::L2;
  std::string lattice_file = DIMTRUNC_DEFAULT_LATTICE;
  /// Largest node count the generating vector was built for.
  std::uint64_t lattice_n_max = std::uint64_t{1} << 20;
  double a0 = 1.5;
  std::size_t shifts = 1;
  /// 0 selects the hardware concurrency.
  unsigned workers = 0;
  // Tighter than the 1e-10 solver contract: the smallest truncation
  // differences are ~1e-7 relative to the solution.
  double solver_rtol = 1e-12;

  /// h = 2^-5, 2^20 nodes, s' = 2^11, s = 2..512.
  void apply_paper_scale() {
    mesh_m = 32;
    n_nodes = std::uint64_t{1} << 20;
    s_ref = 2048;
    s_list = {2, 4, 8, 16, 32, 64, 128, 256, 512};
  }

  unsigned worker_count() const { return workers ? workers : default_worker_count(); }

  /// Structural checks that do not need the lattice file.
  void validate() const {
    if (theta_list.empty()) throw ConfigError("theta list is empty");
    for (double t : theta_list) expected_rate(t);
    if (s_list.empty()) throw ConfigError("s list is empty");
    for (std::size_t i = 0; i < s_list.size(); ++i) {
      if (i > 0 && s_list[i] <= s_list[i - 1])
        throw ConfigError("s list must be strictly increasing");
      if (s_list[i] > s_ref)
        throw ConfigError("truncation dimension " + std::to_string(s_list[i]) +
                          " exceeds the reference dimension " + std::to_string(s_ref));
    }
    if (s_ref == 0) throw ConfigError("reference dimension must be positive");
    if (mesh_m == 0) throw ConfigError("mesh_m must be positive");
    if (!is_power_of_two(n_nodes) || n_nodes > lattice_n_max)
      throw ConfigError("n_nodes must be a power of two not exceeding " +
                        std::to_string(lattice_n_max));
    if (quantities.empty()) throw ConfigError("no quantity selected");
    if (shifts == 0) throw ConfigError("shifts must be positive");
    if (!(a0 > 0.0)) throw ConfigError("a0 must be positive");
    if (!(solver_rtol > 0.0 && solver_rtol <= 1e-10))
      throw ConfigError("solver_rtol must lie in (0, 1e-10]");
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["theta"] = c.theta_list;
  j["s_list"] = c.s_list;
  j["s_ref"] = c.s_ref;
  j["mesh_m"] = c.mesh_m;
  j["n_nodes"] = c.n_nodes;
  j["seed"] = c.seed;
  j["transform"] = c.transform.name();
  std::vector<std::string> q;
  for (Quantity v : c.quantities) q.emplace_back(to_string(v));
  j["quantity"] = q;
  j["norm"] = to_string(c.norm);
  j["lattice_file"] = c.lattice_file;
  j["lattice_n_max"] = c.lattice_n_max;
  j["a0"] = c.a0;
  j["shifts"] = c.shifts;
  j["workers"] = c.workers;
  j["solver_rtol"] = c.solver_rtol;
  return j;
}

/// Keys absent from the document keep their defaults; unknown keys are
/// rejected. "quantity" accepts a string or an array of strings.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{
      "theta",        "s_list", "s_ref",  "mesh_m",  "n_nodes",    "seed",
      "transform",    "quantity", "norm", "lattice_file", "lattice_n_max", "a0",
      "shifts",       "workers", "solver_rtol"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("theta")) c.theta_list = j.at("theta").get<std::vector<double>>();
    if (j.contains("s_list")) c.s_list = j.at("s_list").get<std::vector<std::size_t>>();
    if (j.contains("s_ref")) c.s_ref = j.at("s_ref").get<std::size_t>();
    if (j.contains("mesh_m")) c.mesh_m = j.at("mesh_m").get<std::size_t>();
    if (j.contains("n_nodes")) c.n_nodes = j.at("n_nodes").get<std::uint64_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("transform")) c.transform = Transform::from_string(j.at("transform"));
    if (j.contains("quantity")) {
      const auto& q = j.at("quantity");
      c.quantities.clear();
      if (q.is_string()) {
        c.quantities.push_back(quantity_from_string(q.get<std::string>()));
      } else {
        for (const auto& item : q) c.quantities.push_back(quantity_from_string(item));
      }
    }
    if (j.contains("norm")) c.norm = norm_from_string(j.at("norm"));
    if (j.contains("lattice_file")) c.lattice_file = j.at("lattice_file").get<std::string>();
    if (j.contains("lattice_n_max")) c.lattice_n_max = j.at("lattice_n_max").get<std::uint64_t>();
    if (j.contains("a0")) c.a0 = j.at("a0").get<double>();
    if (j.contains("shifts")) c.shifts = j.at("shifts").get<std::size_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    if (j.contains("solver_rtol")) c.solver_rtol = j.at("solver_rtol").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

inline bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return to_json(a) == to_json(b);
}

/// Source term f(x) = x1.
inline double experiment_source(const Point& x) { return x.x1; }

/// Upper bound on ||f||_{H^-1} for f = x1: Poincare constant 1/(pi sqrt 2)
/// times ||x1||_{L2} = 1/sqrt 3.
inline double experiment_source_dual_norm() { return 1.0 / (std::numbers::pi * std::sqrt(6.0)); }

// ---------------------------------------------------------------- predict

struct PredictionRow {
  std::size_t s = 0;
  LogTruncationBound log_bound;  // natural logs, bound on the squared error
};

struct Prediction {
  double theta = 0.0;
  double expected_rate = 0.0;
  double p = 0.0;
  int k = 0;
  CoercivityBounds coercivity;
  std::vector<PredictionRow> rows;
};

/// Regularity constants of the discrete solution map: theta_l = l! ||f||/a_min
/// and b_j = j^-theta / a_min.
inline TheoryParams pde_theory_params(const ExperimentConfig& config, double theta) {
  DiffusionFieldSpec spec{config.a0, theta, config.transform, config.s_ref};
  const CoercivityBounds cb = coercivity_bounds(spec);
  TheoryParams params;
  params.p = summability_exponent(theta);
  params.theta = TheoryParams::factorial_theta(experiment_source_dual_norm() / cb.a_min,
                                               taylor_order(params.p) + 2);
  params.b = b_sequence(spec, config.s_ref);
  params.c_mu = Transform(TransformKind::identity).moment_constant();
  params.c_xi = config.transform.moment_constant();
  return params;
}

inline std::vector<Prediction> predict(const ExperimentConfig& config) {
  config.validate();
  std::vector<Prediction> out;
  const MomentSource moment = config.transform.kind() == TransformKind::identity
                                  ? MomentSource::mu
                                  : MomentSource::xi;
  for (double theta : config.theta_list) {
    Prediction pr;
    pr.theta = theta;
    pr.expected_rate = expected_rate(theta);
    pr.p = summability_exponent(theta);
    pr.k = taylor_order(pr.p);
    pr.coercivity = coercivity_bounds({config.a0, theta, config.transform, config.s_ref});
    const TheoryParams params = pde_theory_params(config, theta);
    for (std::size_t s : config.s_list) {
      if (s == 0) continue;
      pr.rows.push_back({s, log_truncation_bound_terms(params, s, moment)});
    }
    out.push_back(std::move(pr));
  }
  return out;
}

/// Bounds are written as log10 values: for slow decay they exceed the
/// double range by thousands of orders of magnitude.
inline std::string prediction_csv(const std::vector<Prediction>& preds) {
  const double to10 = 1.0 / std::log(10.0);
  std::ostringstream out;
  out << "theta,expected_rate,p,k,a_min,a_max,s,log10_bound_squared,log10_bound_first,"
         "log10_bound_second\n";
  for (const auto& pr : preds)
    for (const auto& row : pr.rows)
      out << format_double(pr.theta) << "," << format_double(pr.expected_rate) << ","
          << format_double(pr.p) << "," << pr.k << "," << format_double(pr.coercivity.a_min)
          << "," << format_double(pr.coercivity.a_max) << "," << row.s << ","
          << format_double(row.log_bound.total() * to10) << ","
          << format_double(row.log_bound.first * to10) << ","
          << format_double(row.log_bound.second * to10) << "\n";
  return out.str();
}

inline std::string prediction_text(const std::vector<Prediction>& preds) {
  std::ostringstream out;
  for (const auto& pr : preds) {
    out << "theta=" << pr.theta << "  expected rate=" << pr.expected_rate << "  p=" << pr.p
        << "  k=" << pr.k << "  a_min=" << pr.coercivity.a_min
        << "  a_max=" << pr.coercivity.a_max
        << "  (series a_min=" << pr.coercivity.a_min_infinite << ")\n";
    for (const auto& row : pr.rows)
      out << "  s=" << row.s << "  bound on error=10^"
          << 0.5 * row.log_bound.total() / std::log(10.0) << "\n";
  }
  return out.str();
}

// -------------------------------------------------------------------- run

struct RunResult {
  /// tables[i][q]: theta_list[i] and quantities[q].
  std::vector<std::vector<ErrorTable>> tables;
};

inline std::map<std::string, std::string> run_metadata(const ExperimentConfig& c, double theta,
                                                        Quantity q) {
  std::map<std::string, std::string> m;
  m["quantity"] = to_string(q);
  m["norm"] = q == Quantity::full_solution ? to_string(c.norm) : "abs";
  m["theta"] = format_double(theta);
  m["expected_rate"] = format_double(expected_rate(theta));
  m["transform"] = c.transform.name();
  m["n"] = std::to_string(c.n_nodes);
  m["s_ref"] = std::to_string(c.s_ref);
  m["mesh_m"] = std::to_string(c.mesh_m);
  m["h"] = format_double(1.0 / static_cast<double>(c.mesh_m));
  m["seed"] = std::to_string(c.seed);
  m["shifts"] = std::to_string(c.shifts);
  m["a0"] = format_double(c.a0);
  return m;
}

/// Per-node work for one decay value: solves the reference problem at
/// s_ref and every truncated problem, writing the squared differences
/// [norm part for each s..., qoi part for each s...].
class TruncationSweepWorker {
public:
  struct Shared {
    const StiffnessAssembler* assembler;
    const ModeTable* modes;
    const std::vector<double>* load;
    const std::vector<double>* initial_guess;  // solution for y = 0
    DiffusionFieldSpec spec;
    const LatticeRule* rule;
    std::uint64_t n_used;
    std::vector<std::size_t> s_list;  // strictly increasing, each <= s_ref
    std::size_t s_ref;
    Norm norm;
    SolverOptions solver;
  };

  explicit TruncationSweepWorker(const Shared& shared)
      : sh_(&shared),
        sweep_(*shared.modes, shared.spec),
        y_(shared.s_ref),
        xi_(shared.s_ref),
        solutions_(shared.s_list.size()) {}

  void operator()(std::size_t k, std::span<double> out) {
    const std::size_t count = sh_->s_list.size();
    embedded_node(*sh_->rule, sh_->n_used, k, sh_->s_ref, y_);
    for (std::size_t j = 0; j < y_.size(); ++j) xi_[j] = sh_->spec.transform(y_[j]);
    sweep_.reset(xi_);
    for (std::size_t i = 0; i < count; ++i) {
      if (sh_->s_list[i] == sh_->s_ref) continue;
      solve_at(sh_->s_list[i], k, solutions_[i]);
    }
    solve_at(sh_->s_ref, k, reference_);
    const FemSolution ref = expand_interior(sh_->assembler->mesh(), reference_);
    const double g_ref = qoi_nl(ref);
    for (std::size_t i = 0; i < count; ++i) {
      if (sh_->s_list[i] == sh_->s_ref) {
        out[i] = out[count + i] = 0.0;
        continue;
      }
      const FemSolution u = expand_interior(sh_->assembler->mesh(), solutions_[i]);
      out[i] = squared_diff_norm(ref, u, sh_->norm);
      const double dg = g_ref - qoi_nl(u);
      out[count + i] = dg * dg;
    }
  }

private:
  void solve_at(std::size_t s, std::size_t node, std::vector<double>& x) {
    const auto coeff = sweep_.advance_to(s);
    sh_->assembler->stiffness(coeff, matrix_);
    x = *sh_->initial_guess;
    try {
      conjugate_gradient(matrix_, *sh_->load, x, sh_->solver);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string(e.what()) + " at lattice node " + std::to_string(node) +
                                 ", s = " + std::to_string(s),
                             e.residual());
    } catch (const CoercivityError& e) {
      throw CoercivityError(std::string(e.what()) + " at lattice node " + std::to_string(node));
    }
  }

  const Shared* sh_;
  CoefficientSweep sweep_;
  std::vector<double> y_, xi_;
  CsrMatrix matrix_;
  std::vector<std::vector<double>> solutions_;
  std::vector<double> reference_;
};

/// Squared-difference means for one decay value: [norm part..., qoi part...],
/// averaged over nodes and shifts.
inline std::vector<double> truncation_sweep_means(const ExperimentConfig& config, double theta,
                                                  const StiffnessAssembler& assembler,
                                                  const ModeTable& modes,
                                                  const std::vector<double>& load,
                                                  const std::vector<LatticeRule>& rules) {
  DiffusionFieldSpec spec{config.a0, theta, config.transform, config.s_ref};
  coercivity_bounds(spec);

  // Solution for y = 0 seeds every solve on this mesh.
  std::vector<double> a_const(assembler.quadrature_points().size(), config.a0);
  const CsrMatrix a0_matrix = assembler.stiffness(a_const);
  std::vector<double> guess(load.size(), 0.0);
  conjugate_gradient(a0_matrix, load, guess, {1e-14, 0});

  TruncationSweepWorker::Shared shared{&assembler, &modes,  &load,        &guess,
                                       spec,       nullptr, config.n_nodes, config.s_list,
                                       config.s_ref, config.norm, {config.solver_rtol, 0}};
  const std::size_t width = 2 * config.s_list.size();
  std::vector<double> mean(width, 0.0);
  for (const LatticeRule& rule : rules) {
    shared.rule = &rule;
    const auto sums = parallel_block_sums(config.n_nodes, width, config.worker_count(),
                                          [&] { return TruncationSweepWorker(shared); });
    for (std::size_t i = 0; i < width; ++i)
      mean[i] += sums[i] / static_cast<double>(config.n_nodes);
  }
  for (double& v : mean) v /= static_cast<double>(rules.size());
  return mean;
}

/// One random shift per run (or config.shifts of them), shared by every
/// decay value.
inline std::vector<LatticeRule> make_rules(const ExperimentConfig& config) {
  const auto z = load_generating_vector(config.lattice_file);
  if (z.size() < config.s_ref)
    throw ConfigError("generating vector has " + std::to_string(z.size()) +
                      " components, the reference dimension needs " +
                      std::to_string(config.s_ref));
  const std::vector<std::uint64_t> head(z.begin(), z.begin() + config.s_ref);
  std::vector<LatticeRule> rules;
  for (std::size_t r = 0; r < config.shifts; ++r)
    rules.push_back(LatticeRule::make(head, config.lattice_n_max, shift_seed(config.seed, r)));
  return rules;
}

using ProgressFn = std::function<void(const std::string&)>;

inline RunResult run(const ExperimentConfig& config, const ProgressFn& progress = {}) {
  config.validate();
  const std::vector<LatticeRule> rules = make_rules(config);
  const MeshPtr mesh = build_unit_square_mesh(config.mesh_m);
  const StiffnessAssembler assembler(mesh, 2);
  const auto pts = assembler.quadrature_points();
  std::vector<double> f(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) f[i] = experiment_source(pts[i]);
  const std::vector<double> load = assembler.load(f);
  const ModeTable modes(pts, config.s_ref);

  RunResult result;
  const std::size_t count = config.s_list.size();
  for (double theta : config.theta_list) {
    if (progress) progress("theta=" + format_double(theta));
    const auto mean = truncation_sweep_means(config, theta, assembler, modes, load, rules);
    std::vector<ErrorTable> per_quantity;
    for (Quantity q : config.quantities) {
      ErrorTable table;
      table.metadata = run_metadata(config, theta, q);
      const std::size_t offset = q == Quantity::full_solution ? 0 : count;
      for (std::size_t i = 0; i < count; ++i)
        table.rows.push_back({config.s_list[i], std::sqrt(mean[offset + i])});
      table.validate();
      per_quantity.push_back(std::move(table));
    }
    result.tables.push_back(std::move(per_quantity));
  }
  return result;
}

inline std::string table_file_name(double theta, Quantity q) {
  return std::string("errors_") + to_string(q) + "_theta" + format_double(theta) + ".csv";
}

// ------------------------------------------------------------ oracle check

struct OracleCheckSpec {
  ScalarModelSpec model = ScalarModelSpec::power_law(1.5, 0.1, 2.0, 6);
  std::vector<std::size_t> s_list{1, 2, 3, 4, 5};
  int q = 16;
  int q_check = 24;
  std::uint64_t n_used = std::uint64_t{1} << 14;
  std::uint64_t seed = 1;
  std::string lattice_file = DIMTRUNC_DEFAULT_LATTICE;
  std::uint64_t lattice_n_max = std::uint64_t{1} << 20;
  double tolerance = 0.02;
  double convergence_tolerance = 1e-10;
  unsigned workers = 0;
};

/// JSON keys: a0, b (explicit list) or b_scale/b_decay/s_ref, transform,
/// s_list, q, q_check, n_used, seed, lattice_file, lattice_n_max,
/// tolerance, workers.
inline OracleCheckSpec oracle_spec_from_json(const nlohmann::json& j) {
  OracleCheckSpec spec;
  try {
    const double a0 = j.value("a0", 1.5);
    const Transform t = Transform::from_string(j.value("transform", std::string("identity")));
    if (j.contains("b")) {
      spec.model = ScalarModelSpec{a0, j.at("b").get<std::vector<double>>(), t};
    } else {
      spec.model = ScalarModelSpec::power_law(a0, j.value("b_scale", 0.1),
                                              j.value("b_decay", 2.0),
                                              j.value("s_ref", std::size_t{6}), t);
    }
    if (j.contains("s_list")) {
      spec.s_list = j.at("s_list").get<std::vector<std::size_t>>();
    } else {
      spec.s_list.clear();
      for (std::size_t s = 1; s < spec.model.dimension(); ++s) spec.s_list.push_back(s);
    }
    spec.q = j.value("q", spec.q);
    spec.q_check = j.value("q_check", spec.q_check);
    spec.n_used = j.value("n_used", spec.n_used);
    spec.seed = j.value("seed", spec.seed);
    spec.lattice_file = j.value("lattice_file", spec.lattice_file);
    spec.lattice_n_max = j.value("lattice_n_max", spec.lattice_n_max);
    spec.tolerance = j.value("tolerance", spec.tolerance);
    spec.workers = j.value("workers", spec.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed oracle spec: ") + e.what());
  }
  return spec;
}

inline OracleCheckSpec load_oracle_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read oracle spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("oracle spec '" + path + "' is not valid JSON: " + e.what());
  }
  return oracle_spec_from_json(j);
}

struct OracleCheckRow {
  std::size_t s = 0;
  double exact = 0.0;       // E* at q
  double exact_check = 0.0;  // E* at q_check
  double qmc = 0.0;
  double relative_gap = 0.0;
  bool converged = true;
  bool pass = true;
};

struct OracleCheckReport {
  std::vector<OracleCheckRow> rows;
  bool pass = true;
};

inline OracleCheckReport oracle_check(const OracleCheckSpec& spec) {
  spec.model.validate();
  const std::size_t dim = spec.model.dimension();
  if (dim > kOracleMaxDimension)
    throw ConfigError("oracle dimension " + std::to_string(dim) + " exceeds the cap of " +
                      std::to_string(kOracleMaxDimension) + ": a q^" + std::to_string(dim) +
                      " tensor grid is over the evaluation budget");
  const unsigned workers = spec.workers ? spec.workers : default_worker_count();
  const auto exact = exact_l2_truncation_errors(spec.model, spec.s_list, spec.q, workers);
  const auto check = exact_l2_truncation_errors(spec.model, spec.s_list, spec.q_check, workers);

  const auto z = load_generating_vector(spec.lattice_file);
  if (z.size() < dim) throw ConfigError("generating vector shorter than the oracle dimension");
  const std::vector<std::uint64_t> head(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(dim));
  const LatticeRule rule = LatticeRule::make(head, spec.lattice_n_max, spec.seed);
  const auto qmc = estimate_truncation_errors(
      [&] { return ScalarTruncationModel{&spec.model}; }, spec.s_list, dim, rule, spec.n_used,
      workers);

  OracleCheckReport report;
  for (std::size_t i = 0; i < spec.s_list.size(); ++i) {
    OracleCheckRow row;
    row.s = spec.s_list[i];
    row.exact = exact[i];
    row.exact_check = check[i];
    row.qmc = qmc[i];
    if (exact[i] == 0.0) {
      row.relative_gap = qmc[i] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      row.converged = check[i] == 0.0;
    } else {
      row.relative_gap = std::abs(qmc[i] - exact[i]) / exact[i];
      row.converged = std::abs(check[i] - exact[i]) <= spec.convergence_tolerance * exact[i];
    }
    row.pass = row.converged && row.relative_gap <= spec.tolerance;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace dimtrunc
