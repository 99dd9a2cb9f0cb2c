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

#include "asb/functional.hpp"

#include "asb/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace asb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonnegative(const Eigen::VectorXd& w, const char* who) {
  for (const double x : w) {
    if (!std::isfinite(x) || x < 0.0) throw Error(std::string(who) + ": weights must be finite and nonnegative");
  }
}

}  // namespace

ProxFunctional::ProxFunctional(FunctionalTerm term) : term_(std::move(term)) {
  std::visit(Overloaded{
                 [&](const L1Term& t) {
                   require_nonnegative(t.weights, "l1");
                   dim_ = static_cast<std::size_t>(t.weights.size());
                   label_ = "l1";
                 },
                 [&](const WeightedL21Term& t) {
                   require_nonnegative(t.weights, "weighted_l21");
                   if (t.block_size == 0) throw Error("weighted_l21: block_size must be positive");
                   dim_ = static_cast<std::size_t>(t.weights.size()) * t.block_size;
                   label_ = "weighted_l21";
                 },
                 [&](const QuadraticTerm& t) {
                   if (!(t.scale > 0.0) || !std::isfinite(t.scale)) throw Error("quadratic: scale must be positive");
                   if (!t.target.allFinite()) throw Error("quadratic: non-finite target");
                   dim_ = static_cast<std::size_t>(t.target.size());
                   label_ = "quadratic";
                 },
                 [&](const IndicatorTerm& t) {
                   if (t.mask.size() != static_cast<std::size_t>(t.anchor.size())) {
                     throw DimensionError("indicator_point: mask and anchor sizes differ");
                   }
                   dim_ = t.mask.size();
                   label_ = "indicator_point";
                 },
             },
             term_);
  if (dim_ == 0) throw Error(label_ + ": dimension must be positive");
}

double ProxFunctional::value(const HilbertVector& xv) const {
  if (xv.dim() != dim_) throw DimensionError(label_ + ": value dimension mismatch");
  const Eigen::VectorXd& x = xv.values();
  return std::visit(Overloaded{
                        [&](const L1Term& t) { return t.weights.dot(x.cwiseAbs()); },
                        [&](const WeightedL21Term& t) {
                          double acc = 0.0;
                          const auto bs = static_cast<Eigen::Index>(t.block_size);
                          for (Eigen::Index b = 0; b < t.weights.size(); ++b) {
                            if (t.weights[b] != 0.0) acc += t.weights[b] * x.segment(b * bs, bs).norm();
                          }
                          return acc;
                        },
                        [&](const QuadraticTerm& t) { return 0.5 * t.scale * (x - t.target).squaredNorm(); },
                        [&](const IndicatorTerm& t) {
                          for (std::size_t i = 0; i < t.mask.size(); ++i) {
                            const auto ii = static_cast<Eigen::Index>(i);
                            if (t.mask[i] && x[ii] != t.anchor[ii]) return kInfinity;
                          }
                          return 0.0;
                        },
                    },
                    term_);
}

HilbertVector ProxFunctional::prox(const HilbertVector& xv, double step) const {
  if (xv.dim() != dim_) throw DimensionError(label_ + ": prox dimension mismatch");
  if (!(step > 0.0)) throw Error(label_ + ": prox step must be positive");
  HilbertVector out = xv;
  Eigen::VectorXd& z = out.values();
  std::visit(Overloaded{
                 [&](const L1Term& t) {
                   for (Eigen::Index i = 0; i < z.size(); ++i) {
                     const double mag = std::max(std::abs(z[i]) - step * t.weights[i], 0.0);
                     z[i] = std::copysign(mag, z[i]);
                   }
                 },
                 [&](const WeightedL21Term& t) {
                   const auto bs = static_cast<Eigen::Index>(t.block_size);
                   for (Eigen::Index b = 0; b < t.weights.size(); ++b) {
                     auto block = z.segment(b * bs, bs);
                     const double nrm = block.norm();
                     if (nrm == 0.0) continue;
                     block *= std::max(1.0 - step * t.weights[b] / nrm, 0.0);
                   }
                 },
                 [&](const QuadraticTerm& t) { z = (z + step * t.scale * t.target) / (1.0 + step * t.scale); },
                 [&](const IndicatorTerm& t) {
                   for (std::size_t i = 0; i < t.mask.size(); ++i) {
                     if (t.mask[i]) z[static_cast<Eigen::Index>(i)] = t.anchor[static_cast<Eigen::Index>(i)];
                   }
                 },
             },
             term_);
  return out;
}

double ProxFunctional::conjugate_value(const HilbertVector& yv, double tol) const {
  if (yv.dim() != dim_) throw DimensionError(label_ + ": conjugate dimension mismatch");
  const Eigen::VectorXd& y = yv.values();
  return std::visit(Overloaded{
                        // Indicator of the weighted ℓ∞ ball.
                        [&](const L1Term& t) {
                          for (Eigen::Index i = 0; i < y.size(); ++i) {
                            if (std::abs(y[i]) > t.weights[i] + tol * (1.0 + t.weights[i])) return kInfinity;
                          }
                          return 0.0;
                        },
                        // Indicator of the product of weighted ℓ2 balls.
                        [&](const WeightedL21Term& t) {
                          const auto bs = static_cast<Eigen::Index>(t.block_size);
                          for (Eigen::Index b = 0; b < t.weights.size(); ++b) {
                            if (y.segment(b * bs, bs).norm() > t.weights[b] + tol * (1.0 + t.weights[b])) {
                              return kInfinity;
                            }
                          }
                          return 0.0;
                        },
                        [&](const QuadraticTerm& t) { return y.squaredNorm() / (2.0 * t.scale) + y.dot(t.target); },
                        // Support function of the affine set: linear on masked
                        // coordinates, indicator of {0} on the free ones.
                        [&](const IndicatorTerm& t) {
                          const double bound = tol * (1.0 + y.cwiseAbs().maxCoeff());
                          double acc = 0.0;
                          for (std::size_t i = 0; i < t.mask.size(); ++i) {
                            const auto ii = static_cast<Eigen::Index>(i);
                            if (t.mask[i]) {
                              acc += y[ii] * t.anchor[ii];
                            } else if (std::abs(y[ii]) > bound) {
                              return kInfinity;
                            }
                          }
                          return acc;
                        },
                    },
                    term_);
}

ProxFunctional prox_l1(double weight, std::size_t dim) {
  return ProxFunctional(L1Term{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), weight)});
}

ProxFunctional prox_l1(const HilbertVector& weights) { return ProxFunctional(L1Term{weights.values()}); }

ProxFunctional prox_weighted_l21(const HilbertVector& weights, std::size_t block_size) {
  return ProxFunctional(WeightedL21Term{weights.values(), block_size});
}

ProxFunctional prox_weighted_l21(double weight, std::size_t dim, std::size_t block_size) {
  if (block_size == 0 || dim % block_size != 0) {
    throw DimensionError("weighted_l21: dimension " + std::to_string(dim) + " is not divisible by block size " +
                         std::to_string(block_size));
  }
  return ProxFunctional(
      WeightedL21Term{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim / block_size), weight), block_size});
}

ProxFunctional prox_quadratic(const HilbertVector& target, double scale) {
  return ProxFunctional(QuadraticTerm{target.values(), scale});
}

ProxFunctional prox_indicator_point(const HilbertVector& anchor, std::vector<bool> mask) {
  if (mask.empty()) mask.assign(anchor.dim(), true);
  return ProxFunctional(IndicatorTerm{anchor.values(), std::move(mask)});
}

HilbertVector dual_resolvent(const ProxFunctional& F, const HilbertVector& x, double lambda) {
  if (!(lambda > 0.0)) throw Error("dual_resolvent: lambda must be positive");
  return x - lambda * F.prox(x / lambda, 1.0 / lambda);
}

ErrorSchedule::ErrorSchedule(Kind kind, double p, double scale, bool summable)
    : kind_(kind), param_(p), scale_(scale), summable_(summable) {
  if (!(scale_ >= 0.0) || !std::isfinite(scale_)) throw Error("ErrorSchedule: scale must be finite and >= 0");
  if (summable_) {
    // Shipped summable schedules must have visibly bounded partial sums.
    double partial = 0.0;
    for (long k = 1; k <= 100000; ++k) partial += alpha(k) + beta(k);
    if (!std::isfinite(partial)) throw Error("ErrorSchedule: partial sums diverge");
  }
}

ErrorSchedule ErrorSchedule::zero() { return ErrorSchedule(Kind::zero, 0.0, 0.0, true); }

ErrorSchedule ErrorSchedule::geometric(double ratio, double scale) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw Error("ErrorSchedule: geometric ratio must lie in [0, 1)");
  return ErrorSchedule(Kind::geometric, ratio, scale, true);
}

ErrorSchedule ErrorSchedule::harmonic(double scale) { return ErrorSchedule(Kind::harmonic, 0.0, scale, scale == 0.0); }

ErrorSchedule ErrorSchedule::constant(double c) { return ErrorSchedule(Kind::constant, 0.0, c, c == 0.0); }

double ErrorSchedule::alpha(long k) const {
  if (k < 1) throw Error("ErrorSchedule: iteration index starts at 1");
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::geometric:
      return scale_ * std::pow(param_, static_cast<double>(k));
    case Kind::harmonic:
      return scale_ / static_cast<double>(k);
    case Kind::constant:
      return scale_;
  }
  return 0.0;
}

std::string ErrorSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero:
      os << "zero";
      break;
    case Kind::geometric:
      os << "geometric(ratio=" << param_ << ", scale=" << scale_ << ")";
      break;
    case Kind::harmonic:
      os << "harmonic(scale=" << scale_ << ")";
      break;
    case Kind::constant:
      os << "constant(" << scale_ << ")";
      break;
  }
  return os.str();
}

}  // namespace asb
