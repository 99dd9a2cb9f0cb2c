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

#include "asb/vector.hpp"

#include "asb/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace asb {

namespace {

void require_finite(const Eigen::VectorXd& v) {
  if (!v.allFinite()) throw Error("HilbertVector: non-finite entry on construction");
}

}  // namespace

HilbertVector::HilbertVector(std::initializer_list<double> values)
    : data_(static_cast<Eigen::Index>(values.size())) {
  std::copy(values.begin(), values.end(), data_.data());
  require_finite(data_);
}

HilbertVector::HilbertVector(std::span<const double> values)
    : data_(static_cast<Eigen::Index>(values.size())) {
  std::copy(values.begin(), values.end(), data_.data());
  require_finite(data_);
}

HilbertVector::HilbertVector(Eigen::VectorXd values) : data_(std::move(values)) {
  require_finite(data_);
}

HilbertVector HilbertVector::constant(std::size_t dim, double value) {
  return HilbertVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), value));
}

void require_same_dim(const HilbertVector& a, const HilbertVector& b, const char* context) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(context) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
}

HilbertVector& HilbertVector::operator+=(const HilbertVector& other) {
  require_same_dim(*this, other, "operator+=");
  data_ += other.data_;
  return *this;
}

HilbertVector& HilbertVector::operator-=(const HilbertVector& other) {
  require_same_dim(*this, other, "operator-=");
  data_ -= other.data_;
  return *this;
}

HilbertVector operator+(const HilbertVector& a, const HilbertVector& b) {
  HilbertVector r = a;
  r += b;
  return r;
}

HilbertVector operator-(const HilbertVector& a, const HilbertVector& b) {
  HilbertVector r = a;
  r -= b;
  return r;
}

HilbertVector operator-(const HilbertVector& a) {
  HilbertVector r = a;
  r.values() = -r.values();
  return r;
}

HilbertVector operator*(double s, const HilbertVector& a) {
  HilbertVector r = a;
  r *= s;
  return r;
}

HilbertVector operator*(const HilbertVector& a, double s) { return s * a; }

HilbertVector operator/(const HilbertVector& a, double s) {
  HilbertVector r = a;
  r.values() /= s;
  return r;
}

double inner(const HilbertVector& a, const HilbertVector& b) {
  require_same_dim(a, b, "inner");
  return a.values().dot(b.values());
}

double distance(const HilbertVector& a, const HilbertVector& b) {
  require_same_dim(a, b, "distance");
  return (a.values() - b.values()).norm();
}

double relative_defect(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-14);
}

}  // namespace asb
