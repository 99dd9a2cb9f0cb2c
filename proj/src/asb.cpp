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

#include "asb/asb.hpp"

#include "asb/error.hpp"

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>

namespace asb {

void SplitProblem::validate() const {
  if (L.domain_dim() != g.dim()) {
    throw DimensionError("SplitProblem: L domain " + std::to_string(L.domain_dim()) + " != dim(g) " +
                         std::to_string(g.dim()));
  }
  if (L.codomain_dim() != f.dim()) {
    throw DimensionError("SplitProblem: L codomain " + std::to_string(L.codomain_dim()) + " != dim(f) " +
                         std::to_string(f.dim()));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("SplitProblem: lambda must be positive");
}

SplitProblem SplitProblem::with_lambda(double new_lambda) const {
  SplitProblem copy = *this;
  copy.lambda = new_lambda;
  copy.validate();
  return copy;
}

USubsolver default_u_subsolver(std::size_t domain_dim) {
  return domain_dim <= kDirectSolveLimit ? USubsolver::closed_form() : USubsolver::conjugate_gradient();
}

AsbState zero_state(const SplitProblem& problem) {
  return AsbState{HilbertVector::zeros(problem.L.domain_dim()), HilbertVector::zeros(problem.L.codomain_dim()),
                  HilbertVector::zeros(problem.L.codomain_dim()), 0};
}

SetzerView setzer_view(const AsbState& state, double lambda) {
  return SetzerView{lambda * (state.b + state.d), lambda * state.b};
}

DrsState drs_state_from(const AsbState& state, double lambda) {
  auto view = setzer_view(state, lambda);
  return DrsState{std::move(view.x), std::move(view.p), state.k};
}

USolver::USolver(const SplitProblem& problem, double lambda)
    : L_(problem.L), mode_(problem.u_subsolver), lambda_(lambda) {
  problem.validate();
  if (!(lambda > 0.0)) throw Error("u-step: lambda must be positive");
  const auto n = static_cast<Eigen::Index>(problem.g.dim());
  fixed_ = Eigen::VectorXd::Zero(n);
  shift_rhs_ = Eigen::VectorXd::Zero(n);
  if (const auto* q = std::get_if<QuadraticTerm>(&problem.g.term())) {
    shift_ = q->scale / lambda;
    shift_rhs_ = shift_ * q->target;
    for (Eigen::Index i = 0; i < n; ++i) free_.push_back(i);
  } else if (const auto* ind = std::get_if<IndicatorTerm>(&problem.g.term())) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (ind->mask[static_cast<std::size_t>(i)]) {
        fixed_[i] = ind->anchor[i];
      } else {
        free_.push_back(i);
      }
    }
  } else {
    throw Error("u-step: g must be quadratic or indicator_point, got " + problem.g.label());
  }

  if (mode_.kind == USubsolver::Kind::closed_form && !free_.empty()) {
    const Eigen::MatrixXd dense = L_.to_dense();
    Eigen::MatrixXd free_cols(dense.rows(), static_cast<Eigen::Index>(free_.size()));
    for (std::size_t j = 0; j < free_.size(); ++j) free_cols.col(static_cast<Eigen::Index>(j)) = dense.col(free_[j]);
    Eigen::MatrixXd normal = free_cols.transpose() * free_cols;
    normal.diagonal().array() += shift_;
    factor_.emplace(normal);
    if (factor_->info() != Eigen::Success || !(factor_->rcond() > 1e-13)) {
      throw Error(
          "u-step: normal equations are singular; the minimizer requires L*L to be surjective (invertible) on the "
          "free coordinates");
    }
  }
}

Eigen::VectorXd USolver::apply_normal(const Eigen::VectorXd& free_values) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(fixed_.size());
  for (std::size_t j = 0; j < free_.size(); ++j) full[free_[j]] = free_values[static_cast<Eigen::Index>(j)];
  const Eigen::VectorXd image = L_.adjoint_raw(L_.apply_raw(full));
  Eigen::VectorXd out(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t j = 0; j < free_.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = image[free_[j]] + shift_ * free_values[static_cast<Eigen::Index>(j)];
  }
  return out;
}

Eigen::VectorXd USolver::conjugate_gradient(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rhs.size());
  const double target = mode_.cg_tol * rhs.norm();
  if (rhs.norm() == 0.0) return x;
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < mode_.cg_max_iter; ++it) {
    if (std::sqrt(rr) <= target) return x;
    const Eigen::VectorXd Ap = apply_normal(p);
    const double curvature = p.dot(Ap);
    if (!(curvature > 0.0)) {
      throw Error("u-step: conjugate gradients met a non-positive curvature direction; L*L is not invertible");
    }
    const double step = rr / curvature;
    x += step * p;
    r -= step * Ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  if (std::sqrt(rr) <= target) return x;
  throw Error("u-step: conjugate gradients did not converge, residual " + std::to_string(std::sqrt(rr)));
}

HilbertVector USolver::solve(const HilbertVector& offset) const {
  if (offset.dim() != L_.codomain_dim()) throw DimensionError("u-step: offset dimension mismatch");
  HilbertVector u;
  u.values() = fixed_;
  if (free_.empty()) return u;
  const Eigen::VectorXd full_rhs = shift_rhs_ - L_.adjoint_raw(offset.values() + L_.apply_raw(fixed_));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t j = 0; j < free_.size(); ++j) rhs[static_cast<Eigen::Index>(j)] = full_rhs[free_[j]];
  const Eigen::VectorXd sol = factor_ ? Eigen::VectorXd(factor_->solve(rhs)) : conjugate_gradient(rhs);
  for (std::size_t j = 0; j < free_.size(); ++j) u.values()[free_[j]] = sol[static_cast<Eigen::Index>(j)];
  return u;
}

HilbertVector asb_u_step(const SplitProblem& problem, const AsbState& state) {
  return USolver(problem, problem.lambda).solve(state.b - state.d);
}

HilbertVector asb_d_step(const SplitProblem& problem, const AsbState& state, const HilbertVector& u_new) {
  return problem.f.prox(state.b + problem.L.apply(u_new), 1.0 / problem.lambda);
}

namespace {

HilbertVector random_direction(std::mt19937_64& rng, std::size_t dim, double magnitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = normal(rng);
  HilbertVector out;
  out.values() = (magnitude / v.norm()) * v;
  return out;
}

RunTrace run_asb(const SplitProblem& problem, const AsbState& init, const ErrorSchedule* schedule,
                 const StoppingRule& stop, const TraceOptions& options) {
  problem.validate();
  if (init.d.dim() != problem.f.dim() || init.b.dim() != problem.f.dim() || init.u.dim() != problem.g.dim()) {
    throw DimensionError("asb_iterate: initial state dimensions do not match the problem");
  }
  const auto start = std::chrono::steady_clock::now();
  const double lambda = problem.lambda;
  const USolver usolver(problem, lambda);
  const std::size_t stride = options.stride == 0 ? 1 : options.stride;

  // Least-squares inverse of L, used to report energies at perturbed u.
  std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> lsq;
  const bool perturbing = schedule != nullptr && schedule->kind() != ErrorSchedule::Kind::zero;
  RunTrace trace;
  trace.lambda = lambda;
  if (perturbing) {
    if (problem.L.flags().injective.value_or(false) && problem.L.domain_dim() <= kDirectSolveLimit) {
      lsq.emplace(problem.L.to_dense());
    } else {
      trace.energy_from_exact_u = true;
    }
  }
  std::mt19937_64 rng(options.seed);

  AsbState state = init;
  SetzerView view = setzer_view(state, lambda);
  trace.iterates.push_back(Snapshot{state.k, state.u, state.d, state.b, view.x, view.p});

  for (long it = 0; it < stop.max_iter; ++it) {
    const long k = state.k + 1;
    AsbState next;
    HilbertVector Lu;
    double alpha = 0.0;
    double beta = 0.0;
    double residual = 0.0;
    try {
      HilbertVector u = usolver.solve(state.b - state.d);
      Lu = problem.L.apply(u);
      residual = distance(state.d, Lu);
      if (schedule != nullptr) {
        alpha = schedule->alpha(k);
        beta = schedule->beta(k);
      }
      if (alpha > 0.0) {
        const HilbertVector shift = random_direction(rng, Lu.dim(), alpha);
        Lu += shift;
        residual = distance(state.d, Lu);
        if (lsq) u.values() += lsq->solve(shift.values());
      }
      const HilbertVector argument = state.b + Lu;
      HilbertVector d = problem.f.prox(argument, 1.0 / lambda);
      if (beta > 0.0) d += random_direction(rng, d.dim(), beta);
      HilbertVector b = argument - d;
      next = AsbState{std::move(u), std::move(d), std::move(b), k};
    } catch (const IterationError&) {
      throw;
    } catch (const Error& e) {
      throw IterationError(k, e.what());
    }
    if (!next.u.is_finite() || !next.d.is_finite() || !next.b.is_finite()) {
      throw IterationError(k, "non-finite iterate");
    }

    SetzerView next_view = setzer_view(next, lambda);
    const double dx = distance(next_view.x, view.x);
    const double dp = distance(next_view.p, view.p);
    // x_k − x_{k−1} = λ(L u^k − d^{k−1}) and p_k = J_{λ∂f*}(x_k) hold along exact runs.
    const double increment_defect = ((next_view.x - view.x) - lambda * (Lu - state.d)).norm();
    const double shadow_defect = distance(dual_resolvent(problem.f, next_view.x, lambda), next_view.p);

    trace.residuals.push_back(residual);
    trace.energies.push_back(problem.g.value(next.u) + problem.f.value(problem.L.apply(next.u)));
    trace.setzer_defects.push_back(std::max(increment_defect, shadow_defect));
    trace.x_increments.push_back(dx);
    trace.wall_times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (schedule != nullptr) {
      trace.injected_alpha.push_back(alpha);
      trace.injected_beta.push_back(beta);
    }

    const bool done = stop.converged(dx, dp, view.x.norm());
    state = std::move(next);
    view = std::move(next_view);
    ++trace.iterations;
    if (done || trace.iterations % static_cast<long>(stride) == 0 || trace.iterations == stop.max_iter) {
      trace.iterates.push_back(Snapshot{state.k, state.u, state.d, state.b, view.x, view.p});
    }
    if (done) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

}  // namespace

RunTrace asb_iterate(const SplitProblem& problem, const AsbState& init, const StoppingRule& stop,
                     const TraceOptions& options) {
  return run_asb(problem, init, nullptr, stop, options);
}

RunTrace asb_iterate_approx(const SplitProblem& problem, const AsbState& init, const ErrorSchedule& schedule,
                            const StoppingRule& stop, const TraceOptions& options) {
  return run_asb(problem, init, &schedule, stop, options);
}

ResolventPair dual_resolvents(const SplitProblem& problem) {
  problem.validate();
  auto cached = std::make_shared<const USolver>(problem, problem.lambda);
  ResolventPair pair;
  pair.dim = problem.f.dim();
  // J_{λA}(y) = y + λ L u, u = argmin g(u) + (λ/2)‖Lu + y/λ‖².
  pair.JA = [problem, cached](const HilbertVector& y, double lambda) {
    const HilbertVector offset = y / lambda;
    const HilbertVector u =
        lambda == problem.lambda ? cached->solve(offset) : USolver(problem, lambda).solve(offset);
    return y + lambda * problem.L.apply(u);
  };
  pair.JB = [f = problem.f](const HilbertVector& x, double lambda) { return dual_resolvent(f, x, lambda); };
  return pair;
}

AsbState recover_primal(const SplitProblem& problem, const HilbertVector& x, const HilbertVector& p) {
  const double lambda = problem.lambda;
  AsbState state;
  state.b = p / lambda;
  state.d = (x - p) / lambda;
  state.u = USolver(problem, lambda).solve(state.b - state.d);
  return state;
}

}  // namespace asb
