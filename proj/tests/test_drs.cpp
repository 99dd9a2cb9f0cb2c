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

#include "asb/applications.hpp"
#include "asb/asb.hpp"
#include "asb/drs.hpp"
#include "asb/error.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace asb;

namespace {

// A = ∂(½x²), B = ∂(½(x − 2)²) in one dimension; 0 ∈ A(p) + B(p) at p = 1.
ResolventPair quadratic_pair() {
  return {[](const HilbertVector& y, double lambda) { return y / (1.0 + lambda); },
          [](const HilbertVector& y, double lambda) { return (y + HilbertVector{2.0 * lambda}) / (1.0 + lambda); }, 1};
}

ResolventPair identity_pair(std::size_t dim) {
  const auto id = [](const HilbertVector& y, double) { return y; };
  return {id, id, dim};
}

HilbertVector direction(std::size_t n, std::mt19937_64& rng, double norm) {
  std::normal_distribution<double> normal;
  HilbertVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
  return v * (norm / v.norm());
}

std::vector<DrsState> run_exact(const ResolventPair& pair, DrsState s, double lambda, int iters) {
  std::vector<DrsState> states{s};
  for (int k = 0; k < iters; ++k) {
    s = drs_step(s, pair, lambda);
    states.push_back(s);
  }
  return states;
}

}  // namespace

TEST_CASE("quadratic pair converges to the stationary point") {
  const auto pair = quadratic_pair();
  DrsState s{{0.0}, {0.0}, 0};
  for (int k = 0; k < 200; ++k) s = drs_step(s, pair, 1.0);
  CHECK(s.k == 200);
  CHECK(std::abs(s.p[0] - 1.0) <= 1e-12);
  // p = J_B(x) after every update
  CHECK(distance(pair.JB(s.x, 1.0), s.p) == 0.0);
}

TEST_CASE("zero operators leave x fixed") {
  const auto pair = identity_pair(3);
  // consistent start p₀ = J_B(x₀) = x₀
  DrsState s{{1, -2, 5}, {1, -2, 5}, 0};
  const HilbertVector x0 = s.x;
  for (int k = 0; k < 10; ++k) {
    s = drs_step(s, pair, 0.7);
    CHECK(s.x == x0);
  }
}

TEST_CASE("DRS on a 2D LASSO dual recovers the soft-threshold solution") {
  const HilbertVector y{1.7, -0.4};
  const double mu = 0.6;
  const SplitProblem problem = build_lasso_problem(y, mu, 1.0);
  const ResolventPair pair = dual_resolvents(problem);
  DrsState s{HilbertVector(2), HilbertVector(2), 0};
  for (int k = 0; k < 500; ++k) s = drs_step(s, pair, problem.lambda);

  HilbertVector u_star(2);
  for (std::size_t i = 0; i < 2; ++i) u_star[i] = oracle::soft_threshold(y[i], mu);
  // The limit p̂ is the dual solution y − u*, and the recovered primal is u*.
  CHECK(distance(s.p, y - u_star) <= 1e-8);
  CHECK(distance(recover_primal(problem, s.x, s.p).u, u_star) <= 1e-8);
}

TEST_CASE("zero perturbations are bit-identical to the exact step") {
  const SplitProblem problem = build_tv_problem(make_tv_instance({{12}, {1.0}}, 0.3, 5), 0.8);
  const ResolventPair pair = dual_resolvents(problem);
  const HilbertVector zero(pair.dim);
  DrsState exact{HilbertVector(pair.dim), HilbertVector(pair.dim), 0};
  DrsState inexact = exact;
  for (int k = 0; k < 100; ++k) {
    exact = drs_step(exact, pair, 0.8);
    inexact = drs_step_inexact(inexact, pair, 0.8, zero, zero);
    REQUIRE(exact.x == inexact.x);
    REQUIRE(exact.p == inexact.p);
  }
}

TEST_CASE("summable perturbations still converge") {
  const auto pair = quadratic_pair();
  std::mt19937_64 rng(9);
  DrsState s{{0.0}, {0.0}, 0};
  for (long k = 1; k <= 200; ++k) {
    const double size = std::pow(0.5, static_cast<double>(k));
    s = drs_step_inexact(s, pair, 1.0, direction(1, rng, size), direction(1, rng, size));
  }
  CHECK(std::abs(s.p[0] - 1.0) <= 1e-6);
}

TEST_CASE("constant perturbations: negative control") {
  const auto pair = quadratic_pair();
  std::mt19937_64 rng(10);
  std::vector<DrsState> states{{{0.0}, {0.0}, 0}};
  for (long k = 1; k <= 200; ++k) {
    states.push_back(drs_step_inexact(states.back(), pair, 1.0, direction(1, rng, 0.1), direction(1, rng, 0.1)));
  }
  const double terminal = std::abs(states.back().p[0] - 1.0);
  const FejerReport fejer = fejer_check(states, HilbertVector{2.0}, 1e-9);
  MESSAGE("constant 0.1 perturbation: terminal |p - 1| = " << terminal << ", Fejer violations = " << fejer.violations
                                                           << " (recorded, not asserted)");
  CHECK(std::isfinite(terminal));
}

TEST_CASE("Fejer inequality along exact traces") {
  SUBCASE("quadratic pair") {
    const auto pair = quadratic_pair();
    const auto reference = run_exact(pair, {{0.0}, {0.0}, 0}, 1.0, 10000);
    const auto states = run_exact(pair, {{0.0}, {0.0}, 0}, 1.0, 300);
    const FejerReport r = fejer_check(states, reference.back().x);
    CHECK(r.violations == 0);
  }
  SUBCASE("1D TV dual") {
    const SplitProblem problem = build_tv_problem(make_tv_instance({{16}, {1.0}}, 0.2, 3), 1.0);
    const ResolventPair pair = dual_resolvents(problem);
    const DrsState init{HilbertVector(pair.dim), HilbertVector(pair.dim), 0};
    const auto reference = run_exact(pair, init, 1.0, 10000);
    const auto states = run_exact(pair, init, 1.0, 500);
    CHECK(fejer_check(states, reference.back().x).violations == 0);
  }
  SUBCASE("constant sequence at a fixed point") {
    const std::vector<DrsState> states(5, DrsState{{1.0, 2.0}, {0.0, 0.0}, 0});
    const FejerReport r = fejer_check(states, HilbertVector{1.0, 2.0});
    CHECK(r.violations == 0);
    CHECK(r.max_violation == 0.0);
  }
  CHECK_THROWS_AS(fejer_check(std::vector<DrsState>{{{1.0}, {1.0}, 0}}, HilbertVector{1.0}), Error);
}

TEST_CASE("resolvents from a split problem are firmly nonexpansive") {
  const SplitProblem problem = build_tv_problem(make_tv_instance({{10}, {1.0}}, 0.25, 8), 1.3);
  const ResolventPair pair = dual_resolvents(problem);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    const auto x = direction(pair.dim, rng, 3.0);
    const auto y = direction(pair.dim, rng, 1.0);
    for (const auto* J : {&pair.JA, &pair.JB}) {
      const HilbertVector d = (*J)(x, 1.3) - (*J)(y, 1.3);
      CHECK(d.squared_norm() <= inner(d, x - y) + 1e-10);
    }
  }
}

TEST_CASE("increments vanish and fixed-point identities hold") {
  const std::vector<SplitProblem> problems{
      build_lasso_problem(random_vector(10, 42, 2.0), 1.0, 1.0),
      build_tv_problem(make_tv_instance({{32}, {1.0}}, 0.2, 42), 1.0),
  };
  for (const auto& problem : problems) {
    const ResolventPair pair = dual_resolvents(problem);
    const auto states = run_exact(pair, {HilbertVector(pair.dim), HilbertVector(pair.dim), 0}, problem.lambda, 2000);
    CHECK(distance(states[501].x, states[500].x) < 1e-6);
    const DrsState& last = states.back();
    CHECK(distance(pair.JB(last.x, problem.lambda), last.p) <= 1e-8);
    // q = (x̂ − p̂)/λ: J_B(p̂ + λq) = p̂ and J_A(p̂ − λq) = p̂.
    const HilbertVector lq = last.x - last.p;
    CHECK(distance(pair.JB(last.p + lq, problem.lambda), last.p) <= 1e-7);
    CHECK(distance(pair.JA(last.p - lq, problem.lambda), last.p) <= 1e-7);
  }
}

TEST_CASE("drs_iterate honours the stopping rule and flags non-finite iterates") {
  const auto pair = quadratic_pair();
  const RunTrace t = drs_iterate(pair, {{0.0}, {0.0}, 0}, 1.0, StoppingRule{1e-12, 1000});
  CHECK(t.converged);
  CHECK(t.iterations < 1000);
  CHECK(t.iterates.front().k == 0);
  CHECK(t.iterates.back().k == t.iterations);
  CHECK(t.residuals.size() == static_cast<std::size_t>(t.iterations));

  const RunTrace capped = drs_iterate(pair, {{0.0}, {0.0}, 0}, 1.0, StoppingRule{-1.0, 7});
  CHECK(capped.iterations == 7);
  CHECK_FALSE(capped.converged);

  const ResolventPair broken{[](const HilbertVector&, double) {
                               HilbertVector v(1);
                               v[0] = std::numeric_limits<double>::quiet_NaN();
                               return v;
                             },
                             quadratic_pair().JB, 1};
  try {
    (void)drs_step(DrsState{{0.0}, {0.0}, 4}, broken, 1.0);
    FAIL("expected IterationError");
  } catch (const IterationError& e) {
    CHECK(e.iteration() == 5);
  }
}
