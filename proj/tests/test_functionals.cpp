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

#include "asb/error.hpp"
#include "asb/functional.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

using namespace asb;

namespace {

HilbertVector gaussian(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  HilbertVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// One instance of every shipped functional kind, all of dimension 6.
std::vector<ProxFunctional> catalogue() {
  return {
      prox_l1(HilbertVector{0.5, 1.0, 0.0, 2.0, 0.25, 1.5}),
      prox_weighted_l21(HilbertVector{1.0, 0.0, 0.7}, 2),
      prox_quadratic(HilbertVector{1, -2, 0.5, 0, 3, -1}, 2.5),
      prox_indicator_point(HilbertVector{7, 0, -1, 0, 2, 0}, {true, false, true, false, true, false}),
  };
}

}  // namespace

TEST_CASE("l1 prox examples") {
  const auto F = prox_l1(1.0, 1);
  CHECK(F.prox({2}, 1.0) == HilbertVector{1});
  CHECK(F.prox({0.5}, 1.0) == HilbertVector{0});
  CHECK(F.prox({-3}, 1.0) == HilbertVector{-2});
  CHECK(F.value({-3}) == 3.0);
  CHECK(F.label() == "l1");
  CHECK_THROWS_AS(prox_l1(-1.0, 3), Error);
  CHECK_THROWS_AS(prox_l1(HilbertVector{1.0, -0.1}), Error);
}

TEST_CASE("weighted l21 prox examples") {
  const auto F = prox_weighted_l21(1.0, 2, 2);
  const HilbertVector shrunk = F.prox({3, 4}, 1.0);
  CHECK(shrunk[0] == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(shrunk[1] == doctest::Approx(3.2).epsilon(1e-15));
  CHECK(F.prox({0, 0}, 1.0) == HilbertVector{0, 0});
  CHECK(F.value({3, 4}) == 5.0);

  const auto G = prox_weighted_l21(HilbertVector{0.0, 1.0}, 2);
  CHECK(G.prox({3, 4, 0.3, 0.4}, 1.0) == HilbertVector{3, 4, 0, 0});
  CHECK(G.label() == "weighted_l21");

  CHECK_THROWS_AS(prox_weighted_l21(1.0, 5, 2), DimensionError);
  CHECK_THROWS_AS(prox_weighted_l21(HilbertVector{1.0, -1.0}, 2), Error);
}

TEST_CASE("quadratic prox examples") {
  const HilbertVector z{1.5, -2, 0.25};
  const auto F = prox_quadratic(z, 3.0);
  for (double t : {1e-3, 1.0, 40.0}) CHECK(distance(F.prox(z, t), z) <= 1e-15);
  CHECK(prox_quadratic({0}, 1.0).prox({4}, 1.0) == HilbertVector{2});
  const HilbertVector x{10, -4, 2};
  CHECK(distance(F.prox(x, 1e-8), x) <= 1e-6);
  CHECK(F.value(z) == 0.0);
  CHECK_THROWS_AS(prox_quadratic(z, 0.0), Error);
}

TEST_CASE("indicator prox examples") {
  const HilbertVector anchor{1, -2, 3};
  const auto full = prox_indicator_point(anchor);
  CHECK(full.prox({9, 9, 9}, 0.1) == anchor);
  CHECK(full.value(anchor) == 0.0);
  CHECK(full.value({1, -2, 3.5}) == kInfinity);

  const auto none = prox_indicator_point(anchor, {false, false, false});
  CHECK(none.prox({4, 5, 6}, 2.0) == HilbertVector{4, 5, 6});

  const auto mixed = prox_indicator_point({7, 0}, {true, false});
  CHECK(mixed.prox({1, 2}, 1.0) == HilbertVector{7, 2});
  CHECK(mixed.value({7, -100}) == 0.0);
  CHECK(mixed.label() == "indicator_point");
  CHECK_THROWS_AS(prox_indicator_point({1, 2}, {true}), DimensionError);
}

TEST_CASE("dual resolvent examples") {
  CHECK(dual_resolvent(prox_l1(1.0, 1), {2}, 1.0) == HilbertVector{1});
  CHECK(dual_resolvent(prox_l1(1.0, 1), {-0.3}, 1.0) == HilbertVector{-0.3});
  CHECK(dual_resolvent(prox_quadratic({0}, 1.0), {4}, 1.0) == HilbertVector{2});
  CHECK_THROWS_AS(dual_resolvent(prox_l1(1.0, 1), {2}, 0.0), Error);
}

TEST_CASE("Moreau decomposition across the catalogue") {
  std::mt19937_64 rng(21);
  for (const auto& F : catalogue()) {
    CAPTURE(F.label());
    double worst = 0.0;
    for (double lambda : {0.1, 1.0, 10.0}) {
      for (int t = 0; t < 100; ++t) {
        const auto x = gaussian(F.dim(), rng, 3.0);
        const HilbertVector recombined = F.prox(x, lambda) + lambda * dual_resolvent(F, x / lambda, 1.0 / lambda);
        worst = std::max(worst, distance(recombined, x) / (1.0 + x.norm()));
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("dual resolvent output is a subgradient: Fenchel-Young holds with equality") {
  // y = J_{λ∂F*}(x) and p = prox_{F/λ}(x/λ) = (x − y)/λ satisfy y ∈ ∂F(p), hence F(p) + F*(y) = ⟨p, y⟩.
  // The conjugate closed forms are independent of the prox code.
  std::mt19937_64 rng(22);
  for (const auto& F : catalogue()) {
    CAPTURE(F.label());
    for (double lambda : {0.1, 1.0, 10.0}) {
      for (int t = 0; t < 50; ++t) {
        const auto x = gaussian(F.dim(), rng, 3.0);
        const HilbertVector y = dual_resolvent(F, x, lambda);
        const HilbertVector p = F.prox(x / lambda, 1.0 / lambda);
        const double lhs = F.value(p) + F.conjugate_value(y);
        REQUIRE(std::isfinite(lhs));
        CHECK(std::abs(lhs - inner(p, y)) <= 1e-10 * (1.0 + std::abs(inner(p, y))));
      }
    }
  }
}

TEST_CASE("Fenchel-Young inequality on random pairs") {
  std::mt19937_64 rng(23);
  for (const auto& F : catalogue()) {
    for (int t = 0; t < 200; ++t) {
      const auto x = gaussian(F.dim(), rng, 2.0);
      const auto y = gaussian(F.dim(), rng, 0.5);
      const double lhs = F.value(x) + F.conjugate_value(y);
      if (std::isfinite(lhs)) CHECK(lhs >= inner(x, y) - 1e-10);
    }
  }
}

TEST_CASE("prox is firmly nonexpansive") {
  std::mt19937_64 rng(24);
  for (const auto& F : catalogue()) {
    CAPTURE(F.label());
    for (double t : {0.1, 1.0, 10.0}) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = gaussian(F.dim(), rng, 3.0);
        const auto y = gaussian(F.dim(), rng, 3.0);
        const HilbertVector dp = F.prox(x, t) - F.prox(y, t);
        CHECK(dp.squared_norm() <= inner(dp, x - y) + 1e-10);
        CHECK(dp.norm() <= (x - y).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("prox minimizes the proximal objective") {
  std::mt19937_64 rng(25);
  for (const auto& F : catalogue()) {
    CAPTURE(F.label());
    const bool indicator = F.label() == "indicator_point";
    const auto& mask = indicator ? std::get<IndicatorTerm>(F.term()).mask : std::vector<bool>{};
    for (double t : {0.3, 2.0}) {
      const auto x = gaussian(F.dim(), rng, 3.0);
      const HilbertVector px = F.prox(x, t);
      const double best = F.value(px) + 0.5 / t * (px - x).squared_norm();
      for (int probe = 0; probe < 150; ++probe) {
        HilbertVector z = px + gaussian(F.dim(), rng, probe < 75 ? 0.05 : 2.0);
        if (indicator) {
          // stay feasible so the comparison is not vacuous
          for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) z[i] = px[i];
        }
        CHECK(best <= F.value(z) + 0.5 / t * (z - x).squared_norm() + 1e-10);
      }
    }
  }
}

TEST_CASE("values are exactly infinite outside the domain") {
  const auto F = prox_indicator_point({1, 2}, {true, true});
  CHECK(F.value({1, 2.000001}) == kInfinity);
  CHECK(F.conjugate_value({1, 1}) == 3.0);
  const auto l1 = prox_l1(1.0, 2);
  CHECK(l1.conjugate_value({0.5, -1.0}) == 0.0);
  CHECK(l1.conjugate_value({0.5, -1.1}) == kInfinity);
}

TEST_CASE("error schedules") {
  const auto zero = ErrorSchedule::zero();
  CHECK(zero.summable());
  CHECK(zero.alpha(1) == 0.0);

  const auto geo = ErrorSchedule::geometric(0.5);
  CHECK(geo.summable());
  CHECK(geo.alpha(1) == 0.5);
  CHECK(geo.beta(3) == 0.125);
  CHECK_THROWS_AS(ErrorSchedule::geometric(1.0), Error);

  const auto harm = ErrorSchedule::harmonic();
  CHECK_FALSE(harm.summable());
  CHECK(harm.alpha(4) == 0.25);

  const auto c = ErrorSchedule::constant(0.1);
  CHECK_FALSE(c.summable());
  CHECK(c.alpha(1000) == 0.1);

  CHECK_THROWS_AS(geo.alpha(0), Error);
  CHECK(geo.describe().find("geometric") != std::string::npos);
}
