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

#pragma once

#include "asb/asb.hpp"
#include "asb/diagnostics.hpp"
#include "asb/error.hpp"
#include "asb/trace.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace asb {

/// Invalid run configuration; `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what) : Error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct ScheduleSpec {
  std::string type = "zero";  // zero | geometric | harmonic | constant
  double ratio = 0.5;
  double scale = 1.0;
};

struct RunConfig {
  std::string problem;  // lasso | tv1d | tv2d | least_gradient | custom_matrix
  std::string solver = "asb";
  std::vector<std::string> outputs{"trace_csv", "certificates_json", "summary"};

  std::optional<double> lambda;
  std::optional<double> mu;
  double tol = 1e-9;
  std::optional<long> max_iter;
  std::uint64_t seed = 42;
  std::vector<std::size_t> grid;
  std::vector<double> spacing;
  ScheduleSpec schedule;
  bool allow_nonsummable = false;
  double noise = 0.1;
  std::vector<double> y;
  std::size_t n = 10;
  std::string conductivity = "uniform";  // uniform | two_phase
  double contrast = 2.0;
  std::vector<double> boundary{1.0, 1.0, 0.0};  // a·x + b·y + c
  std::string matrix_csv;
  std::string target_csv;
  std::size_t stride = 1;

  /// Testing aid: DRS runs with λ multiplied by this factor in compare mode.
  double debug_drs_lambda_scale = 1.0;

  long effective_max_iter(bool compare) const { return max_iter.value_or(compare ? 200 : 100000); }
  ErrorSchedule error_schedule() const;
};

/// Parses and validates a JSON config document. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Re-checks the invariants after command-line overrides.
void validate(const RunConfig& config);

struct BuiltProblem {
  std::string instance_id;
  SplitProblem problem;
  /// Optimal value from an independent closed form, when the instance has one.
  std::optional<double> reference_value;
};

BuiltProblem build_problem(const RunConfig& config);

struct SummaryRow {
  std::string instance_id;
  long iterations = 0;
  double final_residual = 0.0;
  double final_energy = 0.0;
  double duality_gap = 0.0;
  int certificates_passed = 0;
  int certificates_total = 0;
  double wall_time = 0.0;

  std::string to_line() const;
};

struct RunResult {
  RunTrace trace;
  std::vector<Certificate> certificates;
  SummaryRow summary;
  bool all_passed() const;
};

/// Runs the configured solver and computes the four run certificates.
RunResult execute(const RunConfig& config);

struct CompareResult {
  Certificate equivalence;
  RunTrace asb_trace;
  RunTrace drs_trace;
  std::vector<double> defects;
};

/// ASB and DRS for exactly effective_max_iter(true) iterations from
/// x₀ = λ(b⁰ + d⁰), p₀ = λb⁰, compared iterate by iterate.
CompareResult compare_solvers(const RunConfig& config);

/// Full CLI behaviour: runs, writes the requested artifacts into out_dir and
/// prints the summary line. Returns the process exit status.
int run(const RunConfig& config, const std::string& out_dir, bool compare);

}  // namespace asb
