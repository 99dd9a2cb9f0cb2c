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

// Command-line driver: runs one configured experiment and writes
// trace.csv, certificates.json and summary.txt into the output directory.

#include "asb/runner.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Alternating split Bregman / Douglas-Rachford experiment runner"};
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::string> solver;
  bool compare = false;
  std::optional<std::uint64_t> seed;
  std::optional<long> max_iter;
  std::optional<double> tol;
  double drs_lambda_scale = 1.0;

  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--solver", solver, "asb | drs | asb_approx");
  app.add_flag("--compare", compare, "Run ASB and DRS side by side and certify their equivalence");
  app.add_option("--seed", seed, "Overrides params.seed");
  app.add_option("--max-iter", max_iter, "Overrides params.max_iter");
  app.add_option("--tol", tol, "Overrides params.tol");
  app.add_option("--debug-drs-lambda-scale", drs_lambda_scale, "Compare mode only: scale the DRS penalty")
      ->group("");
  CLI11_PARSE(app, argc, argv);

  asb::RunConfig config;
  try {
    config = asb::load_config(config_path);
  } catch (const asb::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }
  if (solver) config.solver = *solver;
  if (seed) config.seed = *seed;
  if (max_iter) config.max_iter = *max_iter;
  if (tol) config.tol = *tol;
  config.debug_drs_lambda_scale = drs_lambda_scale;
  return asb::run(config, out_dir, compare);
}
