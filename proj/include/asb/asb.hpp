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

#include "asb/drs.hpp"
#include "asb/functional.hpp"
#include "asb/linear_map.hpp"
#include "asb/trace.hpp"
#include "asb/vector.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace asb {

struct USubsolver {
  enum class Kind { closed_form, conjugate_gradient };
  Kind kind = Kind::closed_form;
  double cg_tol = 1e-13;
  int cg_max_iter = 20000;

  static USubsolver closed_form() { return {}; }
  static USubsolver conjugate_gradient(double tol = 1e-13, int max_iter = 20000) {
    return {Kind::conjugate_gradient, tol, max_iter};
  }
};

/// Largest domain dimension for which builders pick the dense direct u-solve.
inline constexpr std::size_t kDirectSolveLimit = 2000;

/// min_u g(u) + f(Lu) with penalty λ.
struct SplitProblem {
  ProxFunctional g;
  ProxFunctional f;
  LinearMap L;
  double lambda = 1.0;
  USubsolver u_subsolver;

  /// Throws unless L maps dim(g) -> dim(f) and lambda > 0.
  void validate() const;
  SplitProblem with_lambda(double new_lambda) const;
};

/// Picks closed_form up to kDirectSolveLimit unknowns, CG above.
USubsolver default_u_subsolver(std::size_t domain_dim);

struct AsbState {
  HilbertVector u;
  HilbertVector d;
  HilbertVector b;
  long k = 0;
};

/// Default start b⁰ = d⁰ = 0 (u⁰ = 0 is carried only for bookkeeping).
AsbState zero_state(const SplitProblem& problem);

/// DRS variables on the dual side: x = λ(b + d), p = λb.
struct SetzerView {
  HilbertVector x;
  HilbertVector p;
};

SetzerView setzer_view(const AsbState& state, double lambda);
DrsState drs_state_from(const AsbState& state, double lambda);

/// Minimizer of u ↦ g(u) + (λ/2)‖Lu + c‖² for g quadratic or a (masked)
/// point indicator. The system matrix is factored once at construction.
class USolver {
 public:
  USolver(const SplitProblem& problem, double lambda);

  HilbertVector solve(const HilbertVector& offset) const;

 private:
  Eigen::VectorXd apply_normal(const Eigen::VectorXd& free_values) const;
  Eigen::VectorXd conjugate_gradient(const Eigen::VectorXd& rhs) const;

  LinearMap L_;
  USubsolver mode_;
  double lambda_;
  double shift_ = 0.0;          // ρ/λ for quadratic g, 0 for indicators
  Eigen::VectorXd fixed_;       // anchor on masked coordinates, 0 elsewhere
  Eigen::VectorXd shift_rhs_;   // (ρ/λ) z for quadratic g
  std::vector<Eigen::Index> free_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> factor_;
};

/// u^k = argmin g(u) + (λ/2)‖b^{k-1} + Lu − d^{k-1}‖².
HilbertVector asb_u_step(const SplitProblem& problem, const AsbState& state);

/// d^k = prox_{f/λ}(b^{k-1} + L u^k).
HilbertVector asb_d_step(const SplitProblem& problem, const AsbState& state, const HilbertVector& u_new);

RunTrace asb_iterate(const SplitProblem& problem, const AsbState& init, const StoppingRule& stop,
                     const TraceOptions& options = {});

/// Approximate variant: after each exact substep, L u^k is moved by a random
/// vector of norm α_k and d^k by one of norm β_k.
RunTrace asb_iterate_approx(const SplitProblem& problem, const AsbState& init, const ErrorSchedule& schedule,
                            const StoppingRule& stop, const TraceOptions& options = {});

/// J_{λA} and J_{λB} for A = ∂(g*∘(−L*)) and B = ∂f*, evaluated through the
/// u-step and the prox of f. DRS on this pair reproduces ASB under the
/// mapping of setzer_view.
ResolventPair dual_resolvents(const SplitProblem& problem);

/// Primal pair (û, d̂) from converged dual variables: d̂ = (x − p)/λ and
/// û from one u-step with b = p/λ.
AsbState recover_primal(const SplitProblem& problem, const HilbertVector& x, const HilbertVector& p);

}  // namespace asb
