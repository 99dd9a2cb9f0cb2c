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

#include "asb/asb.hpp"
#include "asb/linear_map.hpp"
#include "asb/vector.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asb {

/// Denoising instance: piecewise-constant signal plus seeded Gaussian noise.
struct TvInstance {
  GridSpec grid;
  HilbertVector clean_signal;
  HilbertVector noisy_signal;
  double mu = 0.1;
  std::uint64_t seed = 0;
};

/// Piecewise-constant signal of unit amplitude (four plateaus in 1D, a centred
/// square in 2D) with additive noise of standard deviation noise_level.
TvInstance make_tv_instance(const GridSpec& grid, double mu, std::uint64_t seed, double noise_level = 0.1);

/// g = ½‖u − noisy‖², f = μ‖·‖₁ (1D) or μ‖·‖₂,₁ (2D isotropic), L = gradient.
SplitProblem build_tv_problem(const TvInstance& inst, double lambda = 1.0);

/// g = ½‖u − y‖², f = μ‖·‖₁, L = Id.
SplitProblem build_lasso_problem(const HilbertVector& y, double mu, double lambda = 1.0);

/// Standard normal entries from `seed`, scaled by `scale`.
HilbertVector random_vector(std::size_t dim, std::uint64_t seed, double scale = 1.0);

std::vector<std::size_t> boundary_nodes(const GridSpec& grid);
std::vector<bool> boundary_mask(const GridSpec& grid);

/// Node coordinates (i·h_x, j·h_y).
std::pair<double, double> node_position(const GridSpec& grid, std::size_t node);

/// a·x + b·y + c sampled on boundary_nodes(grid).
HilbertVector linear_boundary_data(const GridSpec& grid, double a, double b, double c);

/// `inside` on nodes with both coordinates in the middle third of the
/// domain, `outside` elsewhere.
HilbertVector two_phase_conductivity(const GridSpec& grid, double inside, double outside);

struct LeastGradientInstance {
  GridSpec grid;
  HilbertVector conductivity;
  HilbertVector boundary_data;
  HilbertVector j_magnitude;
  HilbertVector u_true;
};

/// Solves the discrete conductivity equation (the Euler–Lagrange system of
/// Σ_n σ_n ‖(∇u)_n‖² with boundary values fixed) by a dense Cholesky solve,
/// then sets |J|_n = σ_n ‖(∇u_true)_n‖.
LeastGradientInstance forward_model(const GridSpec& grid, const HilbertVector& conductivity,
                                    const HilbertVector& boundary_data);

/// Penalty that scales with the mesh: half the smallest spacing.
double default_least_gradient_lambda(const GridSpec& grid);

/// g = indicator of the boundary data, f = Σ_n |J|_n ‖(∇v)_n‖₂, L = gradient.
SplitProblem build_least_gradient_problem(const LeastGradientInstance& inst, double lambda = 1.0);

/// Σ_n |J|_n ‖(∇u_true)_n‖, the optimal value of the discrete problem:
/// the current σ∇u_true is a divergence-free field attaining the bound.
double least_gradient_optimal_value(const LeastGradientInstance& inst);

nlohmann::json to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TvInstance& inst);
TvInstance tv_instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LeastGradientInstance& inst);
LeastGradientInstance least_gradient_instance_from_json(const nlohmann::json& j);

/// One line per row of the grid (axis 1), comma-separated along axis 0.
void write_grid_csv(const std::string& path, const GridSpec& grid, const HilbertVector& values);

}  // namespace asb
