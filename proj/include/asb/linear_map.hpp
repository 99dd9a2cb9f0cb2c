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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace asb {

/// Structural hypotheses about an operator. Unset means "unknown".
struct OperatorFlags {
  std::optional<bool> injective;
  /// L*L surjective on the domain.
  std::optional<bool> normal_surjective;
};

/// Regular 1D or 2D grid. Nodes are numbered with axis 0 fastest.
struct GridSpec {
  std::vector<std::size_t> shape;
  std::vector<double> spacing;

  /// Throws Error unless 1 or 2 axes, every extent >= 2 and spacing > 0.
  void validate() const;
  std::size_t node_count() const;
  std::size_t axes() const { return shape.size(); }
  std::size_t index(std::size_t i, std::size_t j = 0) const { return i + shape[0] * j; }
  bool is_boundary(std::size_t node) const;
};

/// Bounded linear operator L: R^domain_dim -> R^codomain_dim with exact adjoint.
///
/// Immutable after construction; safe for concurrent read-only use.
class LinearMap {
 public:
  using Action = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  LinearMap(std::size_t domain_dim, std::size_t codomain_dim, Action apply, Action adjoint,
            OperatorFlags flags = {}, std::string label = "operator");

  std::size_t domain_dim() const noexcept { return domain_dim_; }
  std::size_t codomain_dim() const noexcept { return codomain_dim_; }
  const OperatorFlags& flags() const noexcept { return flags_; }
  const std::string& label() const noexcept { return label_; }

  HilbertVector apply(const HilbertVector& u) const;
  HilbertVector adjoint_apply(const HilbertVector& v) const;

  /// Raw Eigen forms without the HilbertVector wrapper (no finiteness check).
  Eigen::VectorXd apply_raw(const Eigen::VectorXd& u) const;
  Eigen::VectorXd adjoint_raw(const Eigen::VectorXd& v) const;

  /// Dense matrix of the operator, assembled column by column when not stored.
  Eigen::MatrixXd to_dense() const;

  /// Copy of this map with different flags (used to build negative controls).
  LinearMap with_flags(OperatorFlags flags) const;

 private:
  std::size_t domain_dim_;
  std::size_t codomain_dim_;
  Action apply_;
  Action adjoint_;
  OperatorFlags flags_;
  std::string label_;
};

/// Matrix-vector product with transpose adjoint. Throws on ragged or empty input.
LinearMap matrix_operator(const std::vector<std::vector<double>>& entries);
LinearMap matrix_operator(const Eigen::MatrixXd& matrix);

LinearMap identity_operator(std::size_t dim);

/// Forward-difference gradient with zero ghost values past the last node on
/// every axis. The adjoint is the transpose of that stencil (a negative
/// backward-difference divergence), so adjointness holds to rounding.
///
/// Output layout is node-major: component a of node n sits at n * axes + a.
LinearMap gradient_operator(const GridSpec& grid);

struct AdjointReport {
  double max_relative_defect = 0.0;
};

/// Worst |<Lu,v> - <u,L*v>| / (1 + |<Lu,v>|) over `trials` random pairs.
AdjointReport check_adjoint(const LinearMap& op, int trials, std::uint64_t seed);

/// Dense matrix from CSV (one row per line, comma-separated decimals).
Eigen::MatrixXd read_matrix_csv(const std::string& path);
/// Vector from single-column CSV.
HilbertVector read_vector_csv(const std::string& path);

}  // namespace asb
