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

#include "asb/drs.hpp"

#include "asb/error.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace asb {

namespace {

void check_inputs(const DrsState& state, const ResolventPair& pair, double lambda) {
  if (!(lambda > 0.0)) throw Error("drs_step: lambda must be positive");
  if (state.x.dim() != pair.dim || state.p.dim() != pair.dim) throw DimensionError("drs_step: state dimension mismatch");
}

DrsState finish(const DrsState& state, HilbertVector x_next, const ResolventPair& pair, double lambda) {
  const long k = state.k + 1;
  if (!x_next.is_finite()) throw IterationError(k, "non-finite x");
  HilbertVector p_next = pair.JB(x_next, lambda);
  if (!p_next.is_finite()) throw IterationError(k, "non-finite p");
  return DrsState{std::move(x_next), std::move(p_next), k};
}

}  // namespace

DrsState drs_step(const DrsState& state, const ResolventPair& pair, double lambda) {
  check_inputs(state, pair, lambda);
  const HilbertVector ja = pair.JA(2.0 * state.p - state.x, lambda);
  if (!ja.is_finite()) throw IterationError(state.k + 1, "non-finite J_A output");
  // Evaluation order matches drs_step_inexact so zero perturbations agree bit for bit.
  return finish(state, (state.x + ja) - state.p, pair, lambda);
}

DrsState drs_step_inexact(const DrsState& state, const ResolventPair& pair, double lambda, const HilbertVector& alpha,
                          const HilbertVector& beta) {
  check_inputs(state, pair, lambda);
  require_same_dim(alpha, state.x, "drs_step_inexact alpha");
  require_same_dim(beta, state.x, "drs_step_inexact beta");
  const HilbertVector shadow = state.p + beta;
  const HilbertVector ja = pair.JA(2.0 * shadow - state.x, lambda);
  if (!ja.is_finite()) throw IterationError(state.k + 1, "non-finite J_A output");
  return finish(state, ((state.x + ja) + alpha) - shadow, pair, lambda);
}

RunTrace drs_iterate(const ResolventPair& pair, const DrsState& init, double lambda, const StoppingRule& stop,
                     const TraceOptions& options, const std::function<double(const DrsState&)>& energy) {
  const auto start = std::chrono::steady_clock::now();
  RunTrace trace;
  trace.lambda = lambda;
  trace.iterates.push_back(Snapshot{init.k, {}, {}, {}, init.x, init.p});
  const std::size_t stride = options.stride == 0 ? 1 : options.stride;

  DrsState state = init;
  for (long it = 0; it < stop.max_iter; ++it) {
    DrsState next = drs_step(state, pair, lambda);
    const double dx = distance(next.x, state.x);
    const double dp = distance(next.p, state.p);
    trace.residuals.push_back(dx / lambda);
    trace.x_increments.push_back(dx);
    trace.setzer_defects.push_back(0.0);
    if (energy) trace.energies.push_back(energy(next));
    trace.wall_times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    const bool done = stop.converged(dx, dp, state.x.norm());
    state = std::move(next);
    ++trace.iterations;
    if (done || trace.iterations % static_cast<long>(stride) == 0 || trace.iterations == stop.max_iter) {
      trace.iterates.push_back(Snapshot{state.k, {}, {}, {}, state.x, state.p});
    }
    if (done) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

FejerReport fejer_check(std::span<const DrsState> trace, const HilbertVector& x_hat, double slack) {
  if (trace.size() < 2) throw Error("fejer_check: need at least two states");
  FejerReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const double lhs = (trace[k + 1].x - x_hat).squared_norm() + (trace[k + 1].x - trace[k].x).squared_norm();
    const double rhs = (trace[k].x - x_hat).squared_norm();
    const double excess = lhs - rhs;
    report.max_violation = std::max(report.max_violation, excess);
    if (excess > slack) ++report.violations;
  }
  return report;
}

std::vector<DrsState> drs_states(const RunTrace& trace) {
  std::vector<DrsState> out;
  out.reserve(trace.iterates.size());
  for (const auto& s : trace.iterates) out.push_back(DrsState{s.x, s.p, s.k});
  return out;
}

}  // namespace asb
