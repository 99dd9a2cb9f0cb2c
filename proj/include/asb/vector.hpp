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

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace asb {

/// Finite-dimensional real vector standing in for an element of H1 or H2.
///
/// Values built from external data are checked for finiteness; arithmetic
/// results are not re-checked (solvers call is_finite() at step boundaries).
class HilbertVector {
 public:
  HilbertVector() = default;
  explicit HilbertVector(std::size_t dim) : data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))) {}
  HilbertVector(std::initializer_list<double> values);
  explicit HilbertVector(std::span<const double> values);
  explicit HilbertVector(Eigen::VectorXd values);

  static HilbertVector zeros(std::size_t dim) { return HilbertVector(dim); }
  static HilbertVector constant(std::size_t dim, double value);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.size()); }
  double operator[](std::size_t i) const { return data_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return data_[static_cast<Eigen::Index>(i)]; }

  const Eigen::VectorXd& values() const noexcept { return data_; }
  Eigen::VectorXd& values() noexcept { return data_; }
  std::vector<double> to_std() const { return {data_.data(), data_.data() + data_.size()}; }

  double norm() const { return data_.norm(); }
  double squared_norm() const { return data_.squaredNorm(); }
  bool is_finite() const { return data_.allFinite(); }

  HilbertVector& operator+=(const HilbertVector& other);
  HilbertVector& operator-=(const HilbertVector& other);
  HilbertVector& operator*=(double s) {
    data_ *= s;
    return *this;
  }

  friend bool operator==(const HilbertVector& a, const HilbertVector& b) {
    return a.data_.size() == b.data_.size() && a.data_ == b.data_;
  }

 private:
  Eigen::VectorXd data_;
};

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b);
HilbertVector operator-(const HilbertVector& a, const HilbertVector& b);
HilbertVector operator-(const HilbertVector& a);
HilbertVector operator*(double s, const HilbertVector& a);
HilbertVector operator*(const HilbertVector& a, double s);
HilbertVector operator/(const HilbertVector& a, double s);

/// Euclidean inner product. Throws DimensionError on mismatch.
double inner(const HilbertVector& a, const HilbertVector& b);

/// ‖a − b‖. Throws DimensionError on mismatch.
double distance(const HilbertVector& a, const HilbertVector& b);

void require_same_dim(const HilbertVector& a, const HilbertVector& b, const char* context);

/// Relative comparison with an absolute floor of 1e-14 on the denominator.
double relative_defect(double value, double reference);

}  // namespace asb
