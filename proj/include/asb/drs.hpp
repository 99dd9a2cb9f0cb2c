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

#include "asb/trace.hpp"
#include "asb/vector.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace asb {

/// Resolvents J_{λA} and J_{λB} of two maximal monotone operators on R^dim.
struct ResolventPair {
  using Resolvent = std::function<HilbertVector(const HilbertVector&, double)>;
  Resolvent JA;
  Resolvent JB;
  std::size_t dim = 0;
};

struct DrsState {
  HilbertVector x;
  HilbertVector p;
  long k = 0;
};

/// x⁺ = J_{λA}(2p − x) + x − p,  p⁺ = J_{λB}(x⁺).
DrsState drs_step(const DrsState& state, const ResolventPair& pair, double lambda);

/// x⁺ = x + J_{λA}(2(p + β) − x) + α − (p + β),  p⁺ = J_{λB}(x⁺).
/// With α = β = 0 the result is bit-identical to drs_step.
DrsState drs_step_inexact(const DrsState& state, const ResolventPair& pair, double lambda, const HilbertVector& alpha,
                          const HilbertVector& beta);

/// Runs drs_step until the stopping rule fires. `energy`, when given, fills
/// the energy series; otherwise it is left empty.
RunTrace drs_iterate(const ResolventPair& pair, const DrsState& init, double lambda, const StoppingRule& stop,
                     const TraceOptions& options = {},
                     const std::function<double(const DrsState&)>& energy = nullptr);

struct FejerReport {
  long violations = 0;
  double max_violation = 0.0;
};

/// Counts k with ‖x_{k+1} − x̂‖² + ‖x_{k+1} − x_k‖² > ‖x_k − x̂‖² + slack.
/// max_violation is the largest left-minus-right excess (<= 0 when none).
FejerReport fejer_check(std::span<const DrsState> trace, const HilbertVector& x_hat, double slack = 1e-9);

/// The consecutive (x, p) states of a trace recorded with stride 1.
std::vector<DrsState> drs_states(const RunTrace& trace);

}  // namespace asb
