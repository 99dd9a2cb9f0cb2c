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

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace asb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Σ w_i |x_i|.
struct L1Term {
  Eigen::VectorXd weights;
};

/// Σ_blocks w_b ‖x_b‖₂ over consecutive blocks of `block_size` entries.
struct WeightedL21Term {
  Eigen::VectorXd weights;
  std::size_t block_size = 1;
};

/// (scale/2) ‖x − target‖².
struct QuadraticTerm {
  Eigen::VectorXd target;
  double scale = 1.0;
};

/// 0 when x agrees with `anchor` on every masked coordinate, +∞ otherwise.
/// An all-false mask gives the zero functional.
struct IndicatorTerm {
  Eigen::VectorXd anchor;
  std::vector<bool> mask;
};

using FunctionalTerm = std::variant<L1Term, WeightedL21Term, QuadraticTerm, IndicatorTerm>;

/// Proper convex lsc functional with closed-form value, proximal map and
/// conjugate. Subgradients are never formed; callers go through prox and
/// the resolvents built from it.
class ProxFunctional {
 public:
  explicit ProxFunctional(FunctionalTerm term);

  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const FunctionalTerm& term() const noexcept { return term_; }

  /// Exactly +∞ outside the domain.
  double value(const HilbertVector& x) const;

  /// argmin_z value(z) + ‖z − x‖² / (2t).
  HilbertVector prox(const HilbertVector& x, double t) const;

  /// Closed-form Fenchel conjugate. Constraint sets of the conjugate are
  /// tested with `feasibility_tol`, relative to the size of the bound.
  double conjugate_value(const HilbertVector& y, double feasibility_tol = 1e-8) const;

 private:
  FunctionalTerm term_;
  std::size_t dim_ = 0;
  std::string label_;
};

ProxFunctional prox_l1(double weight, std::size_t dim);
ProxFunctional prox_l1(const HilbertVector& weights);

/// One weight per block; dim = weights.dim() * block_size.
ProxFunctional prox_weighted_l21(const HilbertVector& weights, std::size_t block_size);
/// Uniform weight; throws when dim is not a multiple of block_size.
ProxFunctional prox_weighted_l21(double weight, std::size_t dim, std::size_t block_size);

ProxFunctional prox_quadratic(const HilbertVector& target, double scale);

/// Projection onto {x : x_i = anchor_i for masked i}. Empty mask = all constrained.
ProxFunctional prox_indicator_point(const HilbertVector& anchor, std::vector<bool> mask = {});

/// J_{λ∂F*}(x) = x − λ F.prox(x/λ, 1/λ).
HilbertVector dual_resolvent(const ProxFunctional& F, const HilbertVector& x, double lambda);

/// Per-iteration error magnitudes α_k, β_k for the inexact solvers.
class ErrorSchedule {
 public:
  enum class Kind { zero, geometric, harmonic, constant };

  static ErrorSchedule zero();
  /// α_k = β_k = scale · ratio^k. Requires 0 <= ratio < 1.
  static ErrorSchedule geometric(double ratio, double scale = 1.0);
  /// α_k = β_k = scale / k. Not summable.
  static ErrorSchedule harmonic(double scale = 1.0);
  /// α_k = β_k = c. Not summable unless c == 0.
  static ErrorSchedule constant(double c);

  double alpha(long k) const;
  double beta(long k) const { return alpha(k); }
  bool summable() const noexcept { return summable_; }
  Kind kind() const noexcept { return kind_; }
  std::string describe() const;

 private:
  ErrorSchedule(Kind kind, double p, double scale, bool summable);
  Kind kind_;
  double param_;
  double scale_;
  bool summable_;
};

}  // namespace asb
