// Copyright 2026 The asb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asb/runner.hpp"

#include "asb/applications.hpp"
#include "asb/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

namespace asb {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where, "must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

ScheduleSpec parse_schedule(const json& j) {
  reject_unknown(j, {"type", "ratio", "scale"}, "schedule");
  ScheduleSpec s;
  if (!j.contains("type")) throw ConfigError("schedule.type", "is required");
  s.type = get_as<std::string>(j.at("type"), "schedule.type");
  if (j.contains("ratio")) s.ratio = get_as<double>(j.at("ratio"), "schedule.ratio");
  if (j.contains("scale")) s.scale = get_as<double>(j.at("scale"), "schedule.scale");
  return s;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_shape(const std::vector<std::size_t>& shape) {
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) out += (i ? "x" : "") + std::to_string(shape[i]);
  return out;
}

GridSpec config_grid(const RunConfig& c, std::vector<std::size_t> default_shape, bool unit_domain) {
  GridSpec grid;
  grid.shape = c.grid.empty() ? std::move(default_shape) : c.grid;
  if (!c.spacing.empty()) {
    grid.spacing = c.spacing;
  } else {
    for (const auto s : grid.shape) grid.spacing.push_back(unit_domain && s > 1 ? 1.0 / static_cast<double>(s - 1) : 1.0);
  }
  try {
    grid.validate();
  } catch (const Error& e) {
    throw ConfigError("grid", e.what());
  }
  return grid;
}

}  // namespace

ErrorSchedule RunConfig::error_schedule() const {
  if (schedule.type == "zero") return ErrorSchedule::zero();
  if (schedule.type == "geometric") return ErrorSchedule::geometric(schedule.ratio, schedule.scale);
  if (schedule.type == "harmonic") return ErrorSchedule::harmonic(schedule.scale);
  if (schedule.type == "constant") return ErrorSchedule::constant(schedule.scale);
  throw ConfigError("schedule.type", "unknown schedule '" + schedule.type + "'");
}

void validate(const RunConfig& c) {
  static const std::set<std::string> problems{"lasso", "tv1d", "tv2d", "least_gradient", "custom_matrix"};
  static const std::set<std::string> solvers{"asb", "drs", "asb_approx"};
  static const std::set<std::string> outputs{"trace_csv", "certificates_json", "summary"};
  if (!problems.contains(c.problem)) throw ConfigError("problem", "unknown problem '" + c.problem + "'");
  if (!solvers.contains(c.solver)) throw ConfigError("solver", "unknown solver '" + c.solver + "'");
  for (const auto& o : c.outputs) {
    if (!outputs.contains(o)) throw ConfigError("outputs", "unknown output '" + o + "'");
  }
  if (c.lambda && !(*c.lambda > 0.0 && std::isfinite(*c.lambda))) throw ConfigError("lambda", "must be positive");
  if (c.mu && !(*c.mu >= 0.0 && std::isfinite(*c.mu))) throw ConfigError("mu", "must be nonnegative");
  if (c.max_iter && *c.max_iter < 1) throw ConfigError("max_iter", "must be at least 1");
  if (!(c.tol >= 0.0)) throw ConfigError("tol", "must be nonnegative");
  if (!(c.noise >= 0.0)) throw ConfigError("noise", "must be nonnegative");
  if (c.stride < 1) throw ConfigError("stride", "must be at least 1");
  if (c.n < 1) throw ConfigError("n", "must be at least 1");
  if (!(c.contrast > 0.0)) throw ConfigError("contrast", "must be positive");
  if (c.conductivity != "uniform" && c.conductivity != "two_phase") {
    throw ConfigError("conductivity", "must be 'uniform' or 'two_phase'");
  }
  if (c.boundary.size() != 3) throw ConfigError("boundary", "expects three coefficients [a, b, c]");
  if (!(c.debug_drs_lambda_scale > 0.0)) throw ConfigError("debug_drs_lambda_scale", "must be positive");
  ErrorSchedule schedule = ErrorSchedule::zero();
  try {
    schedule = c.error_schedule();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("schedule", e.what());
  }
  if (!schedule.summable() && !c.allow_nonsummable) {
    throw ConfigError("schedule", "'" + c.schedule.type +
                                      "' is not summable; set allow_nonsummable to run it as a negative control");
  }
  if (c.problem == "custom_matrix" && (c.matrix_csv.empty() || c.target_csv.empty())) {
    throw ConfigError(c.matrix_csv.empty() ? "matrix_csv" : "target_csv", "is required for custom_matrix");
  }
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, {"problem", "params", "solver", "outputs"}, "");
  RunConfig c;
  if (!doc.contains("problem")) throw ConfigError("problem", "is required");
  c.problem = get_as<std::string>(doc.at("problem"), "problem");
  if (doc.contains("solver")) c.solver = get_as<std::string>(doc.at("solver"), "solver");
  if (doc.contains("outputs")) c.outputs = get_as<std::vector<std::string>>(doc.at("outputs"), "outputs");
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    reject_unknown(p,
                   {"lambda", "mu", "tol", "max_iter", "seed", "grid", "spacing", "schedule", "allow_nonsummable",
                    "noise", "y", "n", "conductivity", "contrast", "boundary", "matrix_csv", "target_csv", "stride"},
                   "params");
    if (p.contains("lambda")) c.lambda = get_as<double>(p.at("lambda"), "lambda");
    if (p.contains("mu")) c.mu = get_as<double>(p.at("mu"), "mu");
    if (p.contains("tol")) c.tol = get_as<double>(p.at("tol"), "tol");
    if (p.contains("max_iter")) c.max_iter = get_as<long>(p.at("max_iter"), "max_iter");
    if (p.contains("seed")) c.seed = get_as<std::uint64_t>(p.at("seed"), "seed");
    if (p.contains("grid")) c.grid = get_as<std::vector<std::size_t>>(p.at("grid"), "grid");
    if (p.contains("spacing")) c.spacing = get_as<std::vector<double>>(p.at("spacing"), "spacing");
    if (p.contains("schedule")) c.schedule = parse_schedule(p.at("schedule"));
    if (p.contains("allow_nonsummable")) c.allow_nonsummable = get_as<bool>(p.at("allow_nonsummable"), "allow_nonsummable");
    if (p.contains("noise")) c.noise = get_as<double>(p.at("noise"), "noise");
    if (p.contains("y")) c.y = get_as<std::vector<double>>(p.at("y"), "y");
    if (p.contains("n")) c.n = get_as<std::size_t>(p.at("n"), "n");
    if (p.contains("conductivity")) c.conductivity = get_as<std::string>(p.at("conductivity"), "conductivity");
    if (p.contains("contrast")) c.contrast = get_as<double>(p.at("contrast"), "contrast");
    if (p.contains("boundary")) c.boundary = get_as<std::vector<double>>(p.at("boundary"), "boundary");
    if (p.contains("matrix_csv")) c.matrix_csv = get_as<std::string>(p.at("matrix_csv"), "matrix_csv");
    if (p.contains("target_csv")) c.target_csv = get_as<std::string>(p.at("target_csv"), "target_csv");
    if (p.contains("stride")) c.stride = get_as<std::size_t>(p.at("stride"), "stride");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  RunConfig c = parse_config(doc);
  // CSV paths are relative to the config file, not the working directory.
  const auto base = std::filesystem::path(path).parent_path();
  for (std::string* csv : {&c.matrix_csv, &c.target_csv}) {
    if (!csv->empty() && std::filesystem::path(*csv).is_relative()) *csv = (base / *csv).string();
  }
  return c;
}

BuiltProblem build_problem(const RunConfig& c) {
  validate(c);
  const std::string seed = "seed" + std::to_string(c.seed);
  if (c.problem == "lasso") {
    const HilbertVector y = c.y.empty() ? random_vector(c.n, c.seed, 2.0) : HilbertVector(std::span<const double>(c.y));
    const double mu = c.mu.value_or(1.0);
    // Closed-form optimum: soft thresholding of y.
    const HilbertVector u_star = prox_l1(mu, y.dim()).prox(y, 1.0);
    const double v_star = 0.5 * (u_star - y).squared_norm() + mu * u_star.values().lpNorm<1>();
    return {"lasso-n" + std::to_string(y.dim()) + (c.y.empty() ? "-" + seed : ""),
            build_lasso_problem(y, mu, c.lambda.value_or(1.0)), v_star};
  }
  if (c.problem == "tv1d" || c.problem == "tv2d") {
    const bool one_d = c.problem == "tv1d";
    const GridSpec grid = config_grid(c, one_d ? std::vector<std::size_t>{32} : std::vector<std::size_t>{16, 16}, false);
    if ((grid.axes() == 1) != one_d) throw ConfigError("grid", "dimension does not match " + c.problem);
    const TvInstance inst = make_tv_instance(grid, c.mu.value_or(0.2), c.seed, c.noise);
    // The isotropic 2D problem converges two orders of magnitude faster at λ = 10 than at 1.
    const double lambda = c.lambda.value_or(one_d ? 1.0 : 10.0);
    return {c.problem + "-" + join_shape(grid.shape) + "-" + seed, build_tv_problem(inst, lambda), std::nullopt};
  }
  if (c.problem == "least_gradient") {
    const GridSpec grid = config_grid(c, {16, 16}, true);
    const HilbertVector sigma = c.conductivity == "uniform" ? HilbertVector::constant(grid.node_count(), 1.0)
                                                            : two_phase_conductivity(grid, c.contrast, 1.0);
    const auto inst = forward_model(grid, sigma, linear_boundary_data(grid, c.boundary[0], c.boundary[1], c.boundary[2]));
    const double lambda = c.lambda.value_or(default_least_gradient_lambda(grid));
    return {"least_gradient-" + join_shape(grid.shape) + "-" + c.conductivity,
            build_least_gradient_problem(inst, lambda), least_gradient_optimal_value(inst)};
  }
  // custom_matrix: min ½‖u − target‖² + μ‖Lu‖₁ with L read from CSV.
  LinearMap L = matrix_operator(read_matrix_csv(c.matrix_csv));
  const HilbertVector target = read_vector_csv(c.target_csv);
  if (target.dim() != L.domain_dim()) throw ConfigError("target_csv", "length must equal the matrix column count");
  const std::size_t rows = L.codomain_dim();
  SplitProblem problem{prox_quadratic(target, 1.0), prox_l1(c.mu.value_or(1.0), rows), std::move(L),
                       c.lambda.value_or(1.0), default_u_subsolver(target.dim())};
  problem.validate();
  return {"custom_matrix", std::move(problem), std::nullopt};
}

std::string SummaryRow::to_line() const {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", wall_time);
  return "instance=" + instance_id + " iterations=" + std::to_string(iterations) +
         " final_residual=" + format_number(final_residual) + " final_energy=" + format_number(final_energy) +
         " duality_gap=" + format_number(duality_gap) + " certificates=" + std::to_string(certificates_passed) + "/" +
         std::to_string(certificates_total) + " wall_time=" + wall + "s";
}

bool RunResult::all_passed() const {
  return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.passed; });
}

RunResult execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const BuiltProblem built = build_problem(config);
  const SplitProblem& problem = built.problem;
  const double lambda = problem.lambda;
  const StoppingRule stop{config.tol, config.effective_max_iter(false)};
  const TraceOptions options{config.stride, config.seed};
  const AsbState init = zero_state(problem);
  const ResolventPair pair = dual_resolvents(problem);

  RunResult result;
  AsbState final_state;
  HilbertVector x_hat;
  HilbertVector p_hat;
  if (config.solver == "drs") {
    auto usolver = std::make_shared<const USolver>(problem, lambda);
    const auto energy = [&problem, usolver, lambda](const DrsState& s) {
      const HilbertVector b = s.p / lambda;
      const HilbertVector d = (s.x - s.p) / lambda;
      return primal_energy(problem, usolver->solve(b - d));
    };
    result.trace = drs_iterate(pair, drs_state_from(init, lambda), lambda, stop, options, energy);
    x_hat = result.trace.final_snapshot().x;
    p_hat = result.trace.final_snapshot().p;
    final_state = recover_primal(problem, x_hat, p_hat);
  } else {
    result.trace = config.solver == "asb" ? asb_iterate(problem, init, stop, options)
                                          : asb_iterate_approx(problem, init, config.error_schedule(), stop, options);
    const Snapshot& s = result.trace.final_snapshot();
    final_state = AsbState{s.u, s.d, s.b, s.k};
    x_hat = s.x;
    p_hat = s.p;
  }

  const double v_star = built.reference_value.value_or(dual_value(problem, p_hat));
  result.certificates.push_back(dual_certificate(problem, final_state.b, final_state.d));
  result.certificates.push_back(primal_recovery_check(problem, final_state.u, final_state.d, v_star));
  result.certificates.push_back(inclusion_certificate(pair, x_hat, p_hat, lambda));
  {
    const auto& defects = result.trace.setzer_defects;
    double worst = 0.0;
    std::string details;
    if (config.solver == "asb_approx") {
      worst = defects.empty() ? 0.0 : defects.back();
      details = "final-iterate DRS identities under " + config.error_schedule().describe();
    } else {
      for (const double d : defects) worst = std::max(worst, d);
      details = "max over the trace of the DRS identities x_k - x_{k-1} = lambda(Lu^k - d^{k-1}), p_k = J(x_k)";
    }
    result.certificates.push_back(Certificate::make(Certificate::Kind::equivalence, worst, 1e-9, details));
  }

  SummaryRow& row = result.summary;
  row.instance_id = built.instance_id;
  row.iterations = result.trace.iterations;
  row.final_residual = result.trace.residuals.empty() ? 0.0 : result.trace.residuals.back();
  row.final_energy = primal_energy(problem, final_state.u);
  row.duality_gap = duality_gap(problem, final_state.u, p_hat);
  row.certificates_total = static_cast<int>(result.certificates.size());
  row.certificates_passed = static_cast<int>(
      std::count_if(result.certificates.begin(), result.certificates.end(), [](const Certificate& c) { return c.passed; }));
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

CompareResult compare_solvers(const RunConfig& config) {
  const BuiltProblem built = build_problem(config);
  const SplitProblem& problem = built.problem;
  const double lambda = problem.lambda;
  // Both runs take exactly the same number of steps.
  const StoppingRule stop{-1.0, config.effective_max_iter(true)};
  const TraceOptions options{config.stride, config.seed};
  const AsbState init = zero_state(problem);

  CompareResult out{Certificate{}, asb_iterate(problem, init, stop, options), RunTrace{}, {}};
  const double drs_lambda = lambda * config.debug_drs_lambda_scale;
  out.drs_trace = drs_iterate(dual_resolvents(problem), drs_state_from(init, drs_lambda), drs_lambda, stop, options);
  out.defects = equivalence_defects(out.asb_trace, out.drs_trace, lambda);
  out.equivalence = equivalence_report(out.asb_trace, out.drs_trace, lambda);
  return out;
}

namespace {

bool wants(const RunConfig& c, const std::string& output) {
  return std::find(c.outputs.begin(), c.outputs.end(), output) != c.outputs.end();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

int run(const RunConfig& config, const std::string& out_dir, bool compare) {
  try {
    validate(config);
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }
  const std::filesystem::path dir(out_dir);
  try {
    std::filesystem::create_directories(dir);
    if (compare) {
      const CompareResult res = compare_solvers(config);
      if (wants(config, "trace_csv")) {
        // Per-iteration cross defects (entry 0 is the initial mapping).
        const std::vector<double> per_iteration(res.defects.begin() + 1, res.defects.end());
        write_trace_csv((dir / "trace.csv").string(), res.asb_trace, per_iteration);
        write_trace_csv((dir / "trace_drs.csv").string(), res.drs_trace);
      }
      if (wants(config, "certificates_json")) {
        write_text(dir / "certificates.json", to_json(std::vector<Certificate>{res.equivalence}).dump(2) + "\n");
      }
      const std::string line = "compare iterations=" + std::to_string(res.asb_trace.iterations) +
                               " max_defect=" + format_number(res.equivalence.defect) +
                               " certificates=" + (res.equivalence.passed ? "1/1" : "0/1");
      std::cout << line << '\n';
      if (wants(config, "summary")) write_text(dir / "summary.txt", line + "\n");
      return res.equivalence.passed ? 0 : 1;
    }

    const RunResult res = execute(config);
    if (wants(config, "trace_csv")) write_trace_csv((dir / "trace.csv").string(), res.trace);
    if (wants(config, "certificates_json")) {
      write_text(dir / "certificates.json", to_json(res.certificates).dump(2) + "\n");
    }
    const std::string line = res.summary.to_line();
    std::cout << line << '\n';
    if (wants(config, "summary")) write_text(dir / "summary.txt", line + "\n");
    return res.all_passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const IterationError& e) {
    std::cerr << "solver error at " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace asb
