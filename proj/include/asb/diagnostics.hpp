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
#include "asb/drs.hpp"
#include "asb/trace.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace asb {

struct Certificate {
  enum class Kind { dual_optimal, primal_optimal, inclusion, equivalence };

  Kind kind;
  double defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string details;

  /// passed = (defect <= tolerance); NaN never passes.
  static Certificate make(Kind kind, double defect, double tolerance, std::string details);
};

std::string to_string(Certificate::Kind kind);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const std::vector<Certificate>& certificates);

/// g(u) + f(Lu).
double primal_energy(const SplitProblem& problem, const HilbertVector& u);

/// −g*(−L*b) − f*(b); −∞ when b is dual infeasible.
double dual_value(const SplitProblem& problem, const HilbertVector& b, double feasibility_tol = 1e-8);

/// Primal minus dual objective. `b` is the dual variable itself (λ b^k for ASB runs).
double duality_gap(const SplitProblem& problem, const HilbertVector& u, const HilbertVector& b,
                   double feasibility_tol = 1e-8);

/// Defect ‖J_{λ∂f*}(λ(d̂ + b̂)) − λ b̂‖ for ASB variables (b̂, d̂).
Certificate dual_certificate(const SplitProblem& problem, const HilbertVector& b_hat, const HilbertVector& d_hat,
                             double tol = 1e-7);

/// Checks ‖Lû − d̂‖ <= tol and |g(û) + f(Lû) − v*| <= tol (1 + |v*|).
Certificate primal_recovery_check(const SplitProblem& problem, const HilbertVector& u_hat,
                                  const HilbertVector& d_hat, double v_star, double tol = 1e-6);

/// With q = (x̂ − p̂)/λ, checks q ∈ B(p̂) and −q ∈ A(p̂) through
/// J_{λB}(p̂ + λq) = p̂ and J_{λA}(p̂ − λq) = p̂.
Certificate inclusion_certificate(const ResolventPair& pair, const HilbertVector& x_hat, const HilbertVector& p_hat,
                                  double lambda, double tol = 1e-7);

/// max_k max(‖x_k − λ(b^k + d^k)‖, ‖p_k − λ b^k‖) between an ASB trace and a
/// DRS trace recorded with the same stride. Throws on length mismatch.
Certificate equivalence_report(const RunTrace& asb_trace, const RunTrace& drs_trace, double lambda,
                               double tol = 1e-9);

/// Per-iteration cross defects used by equivalence_report.
std::vector<double> equivalence_defects(const RunTrace& asb_trace, const RunTrace& drs_trace, double lambda);

struct SummabilityReport {
  std::vector<double> partial_sums;
  /// Increase of the partial sums over the last 100 iterations (or the whole
  /// trace when shorter).
  double tail_increment = 0.0;
  double residual_final = 0.0;
};

SummabilityReport summability_report(const RunTrace& trace);

/// CSV with columns k,residual,energy,setzer_defect,x_increment at 17
/// significant digits. `setzer_override`, when non-empty, replaces the
/// setzer_defect column.
void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::vector<double>& setzer_override = {});
void write_trace_csv(const std::string& path, const RunTrace& trace, const std::vector<double>& setzer_override = {});

}  // namespace asb
