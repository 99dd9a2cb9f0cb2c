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

#include "asb/linear_map.hpp"

#include "asb/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace asb {

void GridSpec::validate() const {
  if (shape.empty() || shape.size() > 2) throw Error("GridSpec: only 1D and 2D grids are supported");
  if (spacing.size() != shape.size()) throw Error("GridSpec: spacing must have one entry per axis");
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (shape[a] < 2) throw Error("GridSpec: every axis needs at least 2 nodes");
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) throw Error("GridSpec: spacing must be positive");
  }
}

std::size_t GridSpec::node_count() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

bool GridSpec::is_boundary(std::size_t node) const {
  const std::size_t i = node % shape[0];
  if (i == 0 || i + 1 == shape[0]) return true;
  if (shape.size() == 2) {
    const std::size_t j = node / shape[0];
    if (j == 0 || j + 1 == shape[1]) return true;
  }
  return false;
}

LinearMap::LinearMap(std::size_t domain_dim, std::size_t codomain_dim, Action apply, Action adjoint,
                     OperatorFlags flags, std::string label)
    : domain_dim_(domain_dim),
      codomain_dim_(codomain_dim),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)),
      flags_(flags),
      label_(std::move(label)) {
  if (domain_dim_ == 0 || codomain_dim_ == 0) throw Error("LinearMap: dimensions must be positive");
}

Eigen::VectorXd LinearMap::apply_raw(const Eigen::VectorXd& u) const {
  if (static_cast<std::size_t>(u.size()) != domain_dim_) {
    throw DimensionError(label_ + ": apply expects dimension " + std::to_string(domain_dim_));
  }
  return apply_(u);
}

Eigen::VectorXd LinearMap::adjoint_raw(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != codomain_dim_) {
    throw DimensionError(label_ + ": adjoint expects dimension " + std::to_string(codomain_dim_));
  }
  return adjoint_(v);
}

HilbertVector LinearMap::apply(const HilbertVector& u) const {
  HilbertVector out;
  out.values() = apply_raw(u.values());
  return out;
}

HilbertVector LinearMap::adjoint_apply(const HilbertVector& v) const {
  HilbertVector out;
  out.values() = adjoint_raw(v.values());
  return out;
}

Eigen::MatrixXd LinearMap::to_dense() const {
  const auto n = static_cast<Eigen::Index>(domain_dim_);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(codomain_dim_), n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = apply_(e);
    e[j] = 0.0;
  }
  return m;
}

LinearMap LinearMap::with_flags(OperatorFlags flags) const {
  LinearMap copy = *this;
  copy.flags_ = flags;
  return copy;
}

LinearMap matrix_operator(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) throw Error("matrix_operator: empty matrix");
  if (!matrix.allFinite()) throw Error("matrix_operator: non-finite entry");
  auto shared = std::make_shared<const Eigen::MatrixXd>(matrix);
  OperatorFlags flags;
  // Rank is cheap enough to settle injectivity for desk-scale matrices.
  if (matrix.rows() * matrix.cols() <= 250000) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(matrix);
    const bool injective = qr.rank() == matrix.cols();
    flags.injective = injective;
    flags.normal_surjective = injective;
  }
  return LinearMap(
      static_cast<std::size_t>(matrix.cols()), static_cast<std::size_t>(matrix.rows()),
      [shared](const Eigen::VectorXd& u) -> Eigen::VectorXd { return *shared * u; },
      [shared](const Eigen::VectorXd& v) -> Eigen::VectorXd { return shared->transpose() * v; }, flags,
      "matrix");
}

LinearMap matrix_operator(const std::vector<std::vector<double>>& entries) {
  if (entries.empty() || entries.front().empty()) throw Error("matrix_operator: empty matrix");
  const std::size_t cols = entries.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != cols) throw Error("matrix_operator: ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i][j];
    }
  }
  return matrix_operator(m);
}

LinearMap identity_operator(std::size_t dim) {
  auto id = [](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v; };
  return LinearMap(dim, dim, id, id, OperatorFlags{true, true}, "identity");
}

LinearMap gradient_operator(const GridSpec& grid) {
  grid.validate();
  const std::size_t nodes = grid.node_count();
  const std::size_t axes = grid.axes();
  const std::size_t nx = grid.shape[0];
  const std::size_t ny = axes == 2 ? grid.shape[1] : 1;
  const double hx = grid.spacing[0];
  const double hy = axes == 2 ? grid.spacing[1] : 1.0;

  // (Du)_{n,a} = (u_{n+e_a} - u_n) / h_a, with u = 0 past the last node.
  auto apply = [=](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes * axes));
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t n = i + nx * j;
        const double here = u[static_cast<Eigen::Index>(n)];
        const double east = i + 1 < nx ? u[static_cast<Eigen::Index>(n + 1)] : 0.0;
        out[static_cast<Eigen::Index>(n * axes)] = (east - here) / hx;
        if (axes == 2) {
          const double north = j + 1 < ny ? u[static_cast<Eigen::Index>(n + nx)] : 0.0;
          out[static_cast<Eigen::Index>(n * axes + 1)] = (north - here) / hy;
        }
      }
    }
    return out;
  };
  // Transpose of the stencil above: (D*v)_n = (v_{n-e_a,a} - v_{n,a}) / h_a.
  auto adjoint = [=](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    Eigen::VectorXd out(static_cast<Eigen::Index>(nodes));
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t n = i + nx * j;
        double acc = -v[static_cast<Eigen::Index>(n * axes)] / hx;
        if (i > 0) acc += v[static_cast<Eigen::Index>((n - 1) * axes)] / hx;
        if (axes == 2) {
          acc -= v[static_cast<Eigen::Index>(n * axes + 1)] / hy;
          if (j > 0) acc += v[static_cast<Eigen::Index>((n - nx) * axes + 1)] / hy;
        }
        out[static_cast<Eigen::Index>(n)] = acc;
      }
    }
    return out;
  };
  // The zero ghost makes the x-differences alone an invertible triangular system.
  return LinearMap(nodes, nodes * axes, apply, adjoint, OperatorFlags{true, true}, "gradient");
}

AdjointReport check_adjoint(const LinearMap& op, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("check_adjoint: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&](std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = normal(rng);
    return v;
  };
  AdjointReport report;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd u = draw(op.domain_dim());
    const Eigen::VectorXd v = draw(op.codomain_dim());
    const double lhs = op.apply_raw(u).dot(v);
    const double rhs = u.dot(op.adjoint_raw(v));
    report.max_relative_defect = std::max(report.max_relative_defect, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return report;
}

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path, std::size_t lineno) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      row.push_back(v);
    } catch (const std::exception&) {
      throw Error(path + ":" + std::to_string(lineno) + ": cannot parse '" + cell + "'");
    }
  }
  return row;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_row(line, path, lineno));
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto rows = read_csv_rows(path);
  if (rows.empty()) throw Error(path + ": empty matrix");
  const std::size_t cols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(path + ": ragged row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

HilbertVector read_vector_csv(const std::string& path) {
  const auto rows = read_csv_rows(path);
  std::vector<double> values;
  for (const auto& r : rows) {
    if (r.size() != 1) throw Error(path + ": expected a single column");
    values.push_back(r.front());
  }
  if (values.empty()) throw Error(path + ": empty vector");
  return HilbertVector(std::span<const double>(values));
}

}  // namespace asb
