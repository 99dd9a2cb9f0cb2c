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

#include "asb/vector.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace asb {

/// Relative fixed-point stopping rule shared by both solvers: stop when
/// max(‖x_{k+1} − x_k‖, ‖p_{k+1} − p_k‖) <= tol · (1 + ‖x_k‖), or at max_iter.
struct StoppingRule {
  double tol = 1e-9;
  long max_iter = 100000;

  bool converged(double dx, double dp, double x_norm) const { return std::max(dx, dp) <= tol * (1.0 + x_norm); }
};

struct TraceOptions {
  /// Keep every `stride`-th iterate; the initial and final ones are always kept.
  std::size_t stride = 1;
  /// Seeds the perturbation directions of the inexact solvers.
  std::uint64_t seed = 0;
};

/// One recorded iterate. DRS traces leave u, d and b empty.
struct Snapshot {
  long k = 0;
  HilbertVector u;
  HilbertVector d;
  HilbertVector b;
  HilbertVector x;
  HilbertVector p;
};

/// Append-only record of a solver run.
///
/// `iterates` starts with k = 0. The per-iteration series hold one entry per
/// iteration k = 1..iterations: residuals[k-1] = ‖d^{k-1} − L u^k‖,
/// energies[k-1] = g(u^k) + f(L u^k) (possibly +∞), x_increments[k-1] =
/// ‖x_k − x_{k-1}‖, and wall_times[k-1] the cumulative seconds.
struct RunTrace {
  double lambda = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<Snapshot> iterates;
  std::vector<double> residuals;
  std::vector<double> energies;
  std::vector<double> setzer_defects;
  std::vector<double> x_increments;
  std::vector<double> wall_times;
  /// Magnitudes actually injected by the inexact solvers (empty otherwise).
  std::vector<double> injected_alpha;
  std::vector<double> injected_beta;
  /// Set when the approximate solver reported energies at the exact u-step
  /// minimizer because the perturbed u could not be reconstructed.
  bool energy_from_exact_u = false;

  const Snapshot& final_snapshot() const { return iterates.back(); }
};

}  // namespace asb
