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
#include "asb/linear_map.hpp"
#include "asb/vector.hpp"

#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace asb;
using Rows = std::vector<std::vector<double>>;

namespace {

std::filesystem::path scratch_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("asb_linalg_" + name);
  std::ofstream(path) << contents;
  return path;
}

HilbertVector gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HilbertVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace

TEST_CASE("inner product") {
  CHECK(inner({1, 2}, {3, 4}) == 11.0);
  CHECK(inner({0, 0}, {5, 7}) == 0.0);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto x = gaussian(7, rng);
    CHECK(inner(x, x) >= 0.0);
    CHECK(inner(x, x) == doctest::Approx(x.squared_norm()).epsilon(1e-14));
  }
  CHECK_THROWS_AS(inner({1, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("vector construction rejects non-finite entries") {
  CHECK_THROWS_AS(HilbertVector({1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(HilbertVector({INFINITY}), Error);
  HilbertVector v{1, 2, 3};
  CHECK(v.dim() == 3);
  CHECK_THROWS_AS((v += HilbertVector{1, 2}), DimensionError);
}

TEST_CASE("relative defect has an absolute floor") {
  CHECK(relative_defect(0.0, 0.0) == 0.0);
  CHECK(std::isfinite(relative_defect(1e-20, 0.0)));
  CHECK(relative_defect(2.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("matrix operator") {
  const LinearMap A = matrix_operator(Rows{{1, 2}, {3, 4}});
  CHECK(A.apply({1, 0}) == HilbertVector{1, 3});
  CHECK(A.adjoint_apply({1, 0}) == HilbertVector{1, 2});
  CHECK(A.flags().injective == true);
  CHECK(A.flags().normal_surjective == true);

  const LinearMap I = matrix_operator(Rows{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(I.apply({5, -1, 2.5}) == HilbertVector{5, -1, 2.5});

  CHECK_THROWS_AS(matrix_operator(Rows{{1, 2}, {3}}), Error);
  CHECK_THROWS_AS(matrix_operator(Rows{}), Error);
  CHECK_THROWS_AS(A.apply({1, 2, 3}), DimensionError);

  const LinearMap rank_deficient = matrix_operator(Rows{{1, 2}, {2, 4}});
  CHECK(rank_deficient.flags().injective == false);
}

TEST_CASE("1D gradient stencil on three nodes") {
  const LinearMap D = gradient_operator({{3}, {1.0}});
  // Forward differences with a zero ghost after the last node: [2-1, 4-2, 0-4].
  CHECK(D.apply({1, 2, 4}) == HilbertVector{1, 2, -4});
  CHECK(D.apply(HilbertVector(3)) == HilbertVector(3));
  // Adjoint is the negative divergence with a zero ghost before the first node.
  CHECK(D.adjoint_apply({1, 2, -4}) == HilbertVector{-1, -1, 6});
  CHECK(D.flags().injective == true);
}

TEST_CASE("2D gradient layout and spacing") {
  const GridSpec grid{{3, 2}, {0.5, 2.0}};
  const LinearMap D = gradient_operator(grid);
  CHECK(D.domain_dim() == 6);
  CHECK(D.codomain_dim() == 12);
  HilbertVector u(6);
  u[grid.index(1, 0)] = 1.0;
  const HilbertVector g = D.apply(u);
  // node (0,0): x-difference (1-0)/0.5, y-difference 0
  CHECK(g[2 * grid.index(0, 0)] == 2.0);
  CHECK(g[2 * grid.index(0, 0) + 1] == 0.0);
  // node (1,0): x-difference (0-1)/0.5, y-difference (0-1)/2
  CHECK(g[2 * grid.index(1, 0)] == -2.0);
  CHECK(g[2 * grid.index(1, 0) + 1] == -0.5);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(gradient_operator({{1}, {1.0}}), Error);
  CHECK_THROWS_AS(gradient_operator({{4}, {0.0}}), Error);
  CHECK_THROWS_AS(gradient_operator({{4, 4}, {1.0}}), Error);
  CHECK_THROWS_AS(gradient_operator({{2, 2, 2}, {1, 1, 1}}), Error);
}

TEST_CASE("adjoint consistency across the operator catalogue") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd M(5, 3);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = normal(rng);

  const std::vector<LinearMap> catalogue{
      identity_operator(6),
      matrix_operator(M),
      gradient_operator({{32}, {1.0}}),
      gradient_operator({{7}, {0.3}}),
      gradient_operator({{16, 16}, {1.0 / 15, 1.0 / 15}}),
      gradient_operator({{5, 9}, {0.7, 1.3}}),
  };
  for (const auto& op : catalogue) {
    CAPTURE(op.label());
    CHECK(check_adjoint(op, 50, 7).max_relative_defect <= 1e-12);
  }
  CHECK(check_adjoint(identity_operator(4), 10, 1).max_relative_defect == 0.0);
}

TEST_CASE("sign-flipped adjoint is detected") {
  Eigen::MatrixXd M(3, 3);
  M << 1, 2, 0, -1, 3, 1, 2, 0, 4;
  Eigen::MatrixXd wrong = M.transpose();
  wrong(0, 1) = -wrong(0, 1);
  const LinearMap bad(
      3, 3, [M](const Eigen::VectorXd& u) -> Eigen::VectorXd { return M * u; },
      [wrong](const Eigen::VectorXd& v) -> Eigen::VectorXd { return wrong * v; });
  const double defect = check_adjoint(bad, 50, 7).max_relative_defect;
  MESSAGE("negative-control adjoint defect: " << defect);
  CHECK(defect > 1e-6);
  CHECK(defect > 1e-2);
}

TEST_CASE("normal operator of the gradient is positive semidefinite") {
  const LinearMap D = gradient_operator({{6, 5}, {1.0, 0.5}});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto u = gaussian(D.domain_dim(), rng);
    CHECK(inner(D.adjoint_apply(D.apply(u)), u) >= 0.0);
  }
}

TEST_CASE("1D gradient with zero padding is injective") {
  for (std::size_t n : {2u, 3u, 8u, 17u}) {
    const Eigen::MatrixXd D = gradient_operator({{n}, {1.0}}).to_dense();
    // Direct solve of D u = 0: full column rank means only the zero solution.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    CHECK(lu.rank() == static_cast<Eigen::Index>(n));
    CHECK(lu.solve(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))).norm() == 0.0);
  }
}

TEST_CASE("CSV loaders") {
  const auto m = scratch_file("m.csv", "1,2,3\n4.5,-6,7e-1\n");
  const Eigen::MatrixXd M = read_matrix_csv(m.string());
  REQUIRE(M.rows() == 2);
  REQUIRE(M.cols() == 3);
  CHECK(M(1, 0) == 4.5);
  CHECK(M(1, 2) == 0.7);

  const auto v = scratch_file("v.csv", "1\n-2.5\n3\n");
  CHECK(read_vector_csv(v.string()) == HilbertVector{1, -2.5, 3});

  const auto ragged = scratch_file("ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged.string()), Error);
  CHECK_THROWS_AS(read_matrix_csv("/nonexistent/asb.csv"), Error);
}
