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

#include "asb/error.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace asb {

namespace {

double clean_value_1d(std::size_t i, std::size_t n) {
  const double t = static_cast<double>(i) / static_cast<double>(n);
  if (t < 0.25) return 0.0;
  if (t < 0.5) return 1.0;
  if (t < 0.75) return -0.5;
  return 0.5;
}

std::vector<double> to_vec(const HilbertVector& v) { return v.to_std(); }

HilbertVector from_json_array(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return HilbertVector(std::span<const double>(values));
}

}  // namespace

HilbertVector random_vector(std::size_t dim, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = scale * normal(rng);
  return HilbertVector(std::move(v));
}

TvInstance make_tv_instance(const GridSpec& grid, double mu, std::uint64_t seed, double noise_level) {
  grid.validate();
  if (!(mu >= 0.0)) throw Error("tv instance: mu must be nonnegative");
  const std::size_t n = grid.node_count();
  HilbertVector clean(n);
  for (std::size_t node = 0; node < n; ++node) {
    if (grid.axes() == 1) {
      clean[node] = clean_value_1d(node, n);
    } else {
      const std::size_t i = node % grid.shape[0];
      const std::size_t j = node / grid.shape[0];
      const bool inside_x = 4 * i >= grid.shape[0] && 4 * i < 3 * grid.shape[0];
      const bool inside_y = 4 * j >= grid.shape[1] && 4 * j < 3 * grid.shape[1];
      clean[node] = inside_x && inside_y ? 1.0 : 0.0;
    }
  }
  HilbertVector noisy = clean + random_vector(n, seed, noise_level);
  return TvInstance{grid, std::move(clean), std::move(noisy), mu, seed};
}

SplitProblem build_tv_problem(const TvInstance& inst, double lambda) {
  if (inst.noisy_signal.dim() != inst.grid.node_count()) {
    throw DimensionError("tv instance: signal length does not match the grid");
  }
  LinearMap L = gradient_operator(inst.grid);
  ProxFunctional f = inst.grid.axes() == 1 ? prox_l1(inst.mu, L.codomain_dim())
                                           : prox_weighted_l21(inst.mu, L.codomain_dim(), inst.grid.axes());
  SplitProblem problem{prox_quadratic(inst.noisy_signal, 1.0), std::move(f), std::move(L), lambda,
                       default_u_subsolver(inst.grid.node_count())};
  problem.validate();
  return problem;
}

SplitProblem build_lasso_problem(const HilbertVector& y, double mu, double lambda) {
  SplitProblem problem{prox_quadratic(y, 1.0), prox_l1(mu, y.dim()), identity_operator(y.dim()), lambda,
                       default_u_subsolver(y.dim())};
  problem.validate();
  return problem;
}

std::vector<std::size_t> boundary_nodes(const GridSpec& grid) {
  grid.validate();
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.is_boundary(n)) out.push_back(n);
  }
  return out;
}

std::vector<bool> boundary_mask(const GridSpec& grid) {
  std::vector<bool> mask(grid.node_count(), false);
  for (const auto n : boundary_nodes(grid)) mask[n] = true;
  return mask;
}

std::pair<double, double> node_position(const GridSpec& grid, std::size_t node) {
  const std::size_t i = node % grid.shape[0];
  const std::size_t j = node / grid.shape[0];
  const double y = grid.axes() == 2 ? static_cast<double>(j) * grid.spacing[1] : 0.0;
  return {static_cast<double>(i) * grid.spacing[0], y};
}

HilbertVector linear_boundary_data(const GridSpec& grid, double a, double b, double c) {
  const auto nodes = boundary_nodes(grid);
  HilbertVector out(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto [x, y] = node_position(grid, nodes[k]);
    out[k] = a * x + b * y + c;
  }
  return out;
}

HilbertVector two_phase_conductivity(const GridSpec& grid, double inside, double outside) {
  grid.validate();
  HilbertVector sigma(grid.node_count());
  const double width = static_cast<double>(grid.shape[0] - 1) * grid.spacing[0];
  const double height = grid.axes() == 2 ? static_cast<double>(grid.shape[1] - 1) * grid.spacing[1] : 0.0;
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    const auto [x, y] = node_position(grid, n);
    const bool in_x = 3.0 * x >= width && 3.0 * x <= 2.0 * width;
    const bool in_y = grid.axes() == 1 || (3.0 * y >= height && 3.0 * y <= 2.0 * height);
    sigma[n] = in_x && in_y ? inside : outside;
  }
  return sigma;
}

LeastGradientInstance forward_model(const GridSpec& grid, const HilbertVector& conductivity,
                                    const HilbertVector& boundary_data) {
  grid.validate();
  const std::size_t nodes = grid.node_count();
  const std::size_t axes = grid.axes();
  if (conductivity.dim() != nodes) throw DimensionError("forward_model: conductivity must have one value per node");
  for (std::size_t n = 0; n < nodes; ++n) {
    if (!(conductivity[n] > 0.0)) throw Error("forward_model: conductivity must be positive");
  }
  const auto bnodes = boundary_nodes(grid);
  if (boundary_data.dim() != bnodes.size()) {
    throw DimensionError("forward_model: boundary data must have one value per boundary node");
  }

  const LinearMap L = gradient_operator(grid);
  Eigen::VectorXd weights(static_cast<Eigen::Index>(nodes * axes));
  for (std::size_t n = 0; n < nodes; ++n) {
    for (std::size_t a = 0; a < axes; ++a) weights[static_cast<Eigen::Index>(n * axes + a)] = conductivity[n];
  }
  const auto weighted_normal = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return L.adjoint_raw(weights.cwiseProduct(L.apply_raw(u)));
  };

  Eigen::VectorXd fixed = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes));
  for (std::size_t k = 0; k < bnodes.size(); ++k) fixed[static_cast<Eigen::Index>(bnodes[k])] = boundary_data[k];
  std::vector<Eigen::Index> free;
  for (std::size_t n = 0; n < nodes; ++n) {
    if (!grid.is_boundary(n)) free.push_back(static_cast<Eigen::Index>(n));
  }

  Eigen::VectorXd u = fixed;
  if (!free.empty()) {
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd K(m, m);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes));
    for (Eigen::Index c = 0; c < m; ++c) {
      e[free[static_cast<std::size_t>(c)]] = 1.0;
      const Eigen::VectorXd col = weighted_normal(e);
      e[free[static_cast<std::size_t>(c)]] = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) K(r, c) = col[free[static_cast<std::size_t>(r)]];
    }
    const Eigen::VectorXd full_rhs = -weighted_normal(fixed);
    Eigen::VectorXd rhs(m);
    for (Eigen::Index r = 0; r < m; ++r) rhs[r] = full_rhs[free[static_cast<std::size_t>(r)]];
    const Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) throw Error("forward_model: conductivity system is singular");
    const Eigen::VectorXd interior = llt.solve(rhs);
    for (Eigen::Index r = 0; r < m; ++r) u[free[static_cast<std::size_t>(r)]] = interior[r];
  }

  const Eigen::VectorXd grad = L.apply_raw(u);
  HilbertVector j_mag(nodes);
  for (std::size_t n = 0; n < nodes; ++n) {
    j_mag[n] = conductivity[n] * grad.segment(static_cast<Eigen::Index>(n * axes), static_cast<Eigen::Index>(axes)).norm();
  }
  return LeastGradientInstance{grid, conductivity, boundary_data, std::move(j_mag), HilbertVector(std::move(u))};
}

double default_least_gradient_lambda(const GridSpec& grid) {
  return 0.5 * *std::min_element(grid.spacing.begin(), grid.spacing.end());
}

SplitProblem build_least_gradient_problem(const LeastGradientInstance& inst, double lambda) {
  const GridSpec& grid = inst.grid;
  const auto bnodes = boundary_nodes(grid);
  if (inst.boundary_data.dim() != bnodes.size()) throw DimensionError("least gradient: boundary data size mismatch");
  if (inst.j_magnitude.dim() != grid.node_count()) throw DimensionError("least gradient: |J| size mismatch");
  HilbertVector anchor(grid.node_count());
  for (std::size_t k = 0; k < bnodes.size(); ++k) anchor[bnodes[k]] = inst.boundary_data[k];
  SplitProblem problem{prox_indicator_point(anchor, boundary_mask(grid)),
                       prox_weighted_l21(inst.j_magnitude, grid.axes()), gradient_operator(grid), lambda,
                       default_u_subsolver(grid.node_count())};
  problem.validate();
  return problem;
}

double least_gradient_optimal_value(const LeastGradientInstance& inst) {
  return prox_weighted_l21(inst.j_magnitude, inst.grid.axes()).value(gradient_operator(inst.grid).apply(inst.u_true));
}

nlohmann::json to_json(const GridSpec& grid) { return {{"shape", grid.shape}, {"spacing", grid.spacing}}; }

GridSpec grid_from_json(const nlohmann::json& j) {
  GridSpec grid{j.at("shape").get<std::vector<std::size_t>>(), j.at("spacing").get<std::vector<double>>()};
  grid.validate();
  return grid;
}

nlohmann::json to_json(const TvInstance& inst) {
  return {{"grid", to_json(inst.grid)},
          {"seed", inst.seed},
          {"mu", inst.mu},
          {"clean_signal", to_vec(inst.clean_signal)},
          {"noisy_signal", to_vec(inst.noisy_signal)}};
}

TvInstance tv_instance_from_json(const nlohmann::json& j) {
  TvInstance inst{grid_from_json(j.at("grid")), from_json_array(j.at("clean_signal")),
                  from_json_array(j.at("noisy_signal")), j.at("mu").get<double>(), j.at("seed").get<std::uint64_t>()};
  if (inst.noisy_signal.dim() != inst.grid.node_count()) throw DimensionError("tv instance: signal size mismatch");
  return inst;
}

nlohmann::json to_json(const LeastGradientInstance& inst) {
  return {{"grid", to_json(inst.grid)},
          {"conductivity", to_vec(inst.conductivity)},
          {"boundary_data", to_vec(inst.boundary_data)},
          {"j_magnitude", to_vec(inst.j_magnitude)},
          {"u_true", to_vec(inst.u_true)}};
}

LeastGradientInstance least_gradient_instance_from_json(const nlohmann::json& j) {
  LeastGradientInstance inst{grid_from_json(j.at("grid")), from_json_array(j.at("conductivity")),
                             from_json_array(j.at("boundary_data")), from_json_array(j.at("j_magnitude")),
                             from_json_array(j.at("u_true"))};
  const std::size_t n = inst.grid.node_count();
  if (inst.conductivity.dim() != n || inst.j_magnitude.dim() != n || inst.u_true.dim() != n ||
      inst.boundary_data.dim() != boundary_nodes(inst.grid).size()) {
    throw DimensionError("least gradient instance: field sizes do not match the grid");
  }
  return inst;
}

void write_grid_csv(const std::string& path, const GridSpec& grid, const HilbertVector& values) {
  if (values.dim() != grid.node_count()) throw DimensionError("write_grid_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  const std::size_t nx = grid.shape[0];
  const std::size_t ny = grid.axes() == 2 ? grid.shape[1] : 1;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (i > 0) out << ',';
      out << values[i + nx * j];
    }
    out << '\n';
  }
}

}  // namespace asb
