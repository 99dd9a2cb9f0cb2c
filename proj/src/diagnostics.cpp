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

#include "asb/diagnostics.hpp"

#include "asb/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace asb {

Certificate Certificate::make(Kind kind, double defect, double tolerance, std::string details) {
  return Certificate{kind, defect, tolerance, defect <= tolerance, std::move(details)};
}

std::string to_string(Certificate::Kind kind) {
  switch (kind) {
    case Certificate::Kind::dual_optimal:
      return "dual_optimal";
    case Certificate::Kind::primal_optimal:
      return "primal_optimal";
    case Certificate::Kind::inclusion:
      return "inclusion";
    case Certificate::Kind::equivalence:
      return "equivalence";
  }
  return "unknown";
}

namespace {

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Certificate& c) {
  return nlohmann::json{{"kind", to_string(c.kind)},
                        {"defect", number_or_string(c.defect)},
                        {"tolerance", c.tolerance},
                        {"passed", c.passed},
                        {"details", c.details}};
}

nlohmann::json to_json(const std::vector<Certificate>& certificates) {
  nlohmann::json list = nlohmann::json::array();
  bool all = true;
  for (const auto& c : certificates) {
    list.push_back(to_json(c));
    all = all && c.passed;
  }
  return nlohmann::json{{"certificates", list}, {"all_passed", all}};
}

double primal_energy(const SplitProblem& problem, const HilbertVector& u) {
  return problem.g.value(u) + problem.f.value(problem.L.apply(u));
}

double dual_value(const SplitProblem& problem, const HilbertVector& b, double feasibility_tol) {
  const double g_star = problem.g.conjugate_value(-problem.L.adjoint_apply(b), feasibility_tol);
  const double f_star = problem.f.conjugate_value(b, feasibility_tol);
  return -(g_star + f_star);
}

double duality_gap(const SplitProblem& problem, const HilbertVector& u, const HilbertVector& b,
                   double feasibility_tol) {
  return primal_energy(problem, u) - dual_value(problem, b, feasibility_tol);
}

Certificate dual_certificate(const SplitProblem& problem, const HilbertVector& b_hat, const HilbertVector& d_hat,
                             double tol) {
  const double lambda = problem.lambda;
  const HilbertVector p = lambda * b_hat;
  const double defect = distance(dual_resolvent(problem.f, lambda * (d_hat + b_hat), lambda), p);
  return Certificate::make(Certificate::Kind::dual_optimal, defect, tol,
                           "resolvent fixed point J(lambda(d+b)) = lambda b");
}

Certificate primal_recovery_check(const SplitProblem& problem, const HilbertVector& u_hat,
                                  const HilbertVector& d_hat, double v_star, double tol) {
  const HilbertVector Lu = problem.L.apply(u_hat);
  const double consistency = distance(Lu, d_hat);
  const double energy = problem.g.value(u_hat) + problem.f.value(Lu);
  const double energy_defect = std::abs(energy - v_star) / (1.0 + std::abs(v_star));
  std::ostringstream details;
  details << "|Lu-d|=" << consistency << " energy=" << format_number(energy) << " v*=" << format_number(v_star);
  const auto& injective = problem.L.flags().injective;
  if (!injective) {
    details << "; L injectivity unknown, uniqueness of u not asserted";
  } else if (*injective) {
    details << "; L injective, u is the unique preimage of d";
  } else {
    details << "; L not injective, u is one preimage of d";
  }
  const double defect = std::isnan(energy_defect) ? energy_defect : std::max(consistency, energy_defect);
  return Certificate::make(Certificate::Kind::primal_optimal, defect, tol, details.str());
}

Certificate inclusion_certificate(const ResolventPair& pair, const HilbertVector& x_hat, const HilbertVector& p_hat,
                                  double lambda, double tol) {
  const HilbertVector q = (x_hat - p_hat) / lambda;
  const double in_b = distance(pair.JB(p_hat + lambda * q, lambda), p_hat);
  const double in_a = distance(pair.JA(p_hat - lambda * q, lambda), p_hat);
  std::ostringstream details;
  details << "B-residual=" << in_b << " A-residual=" << in_a;
  return Certificate::make(Certificate::Kind::inclusion, std::max(in_a, in_b), tol, details.str());
}

std::vector<double> equivalence_defects(const RunTrace& asb_trace, const RunTrace& drs_trace, double lambda) {
  if (asb_trace.iterates.size() != drs_trace.iterates.size()) {
    throw Error("equivalence_report: traces have different lengths (" + std::to_string(asb_trace.iterates.size()) +
                " vs " + std::to_string(drs_trace.iterates.size()) + ")");
  }
  std::vector<double> out;
  out.reserve(asb_trace.iterates.size());
  for (std::size_t i = 0; i < asb_trace.iterates.size(); ++i) {
    const Snapshot& a = asb_trace.iterates[i];
    const Snapshot& r = drs_trace.iterates[i];
    if (a.k != r.k) throw Error("equivalence_report: iteration indices differ at entry " + std::to_string(i));
    const double dx = distance(r.x, lambda * (a.b + a.d));
    const double dp = distance(r.p, lambda * a.b);
    out.push_back(std::max(dx, dp));
  }
  return out;
}

Certificate equivalence_report(const RunTrace& asb_trace, const RunTrace& drs_trace, double lambda, double tol) {
  const auto defects = equivalence_defects(asb_trace, drs_trace, lambda);
  double worst = 0.0;
  long worst_k = 0;
  for (std::size_t i = 0; i < defects.size(); ++i) {
    if (!(defects[i] <= worst)) {
      worst = defects[i];
      worst_k = asb_trace.iterates[i].k;
    }
  }
  std::ostringstream details;
  details << defects.size() << " snapshots, worst at k=" << worst_k;
  return Certificate::make(Certificate::Kind::equivalence, worst, tol, details.str());
}

SummabilityReport summability_report(const RunTrace& trace) {
  SummabilityReport report;
  double acc = 0.0;
  report.partial_sums.reserve(trace.residuals.size());
  for (const double r : trace.residuals) {
    acc += r * r;
    report.partial_sums.push_back(acc);
  }
  if (!report.partial_sums.empty()) {
    // Summed directly: differencing two large partial sums loses the tail to cancellation.
    const std::size_t n = trace.residuals.size();
    for (std::size_t i = n > 100 ? n - 100 : 0; i < n; ++i) report.tail_increment += trace.residuals[i] * trace.residuals[i];
    report.residual_final = trace.residuals.back();
  }
  return report;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, const std::vector<double>& setzer_override) {
  out << "k,residual,energy,setzer_defect,x_increment\n";
  for (std::size_t i = 0; i < trace.residuals.size(); ++i) {
    const double energy = i < trace.energies.size() ? trace.energies[i] : std::nan("");
    const double setzer = i < setzer_override.size() ? setzer_override[i] : trace.setzer_defects[i];
    out << (i + 1) << ',' << format_number(trace.residuals[i]) << ',' << format_number(energy) << ','
        << format_number(setzer) << ',' << format_number(trace.x_increments[i]) << '\n';
  }
}

void write_trace_csv(const std::string& path, const RunTrace& trace, const std::vector<double>& setzer_override) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_trace_csv(out, trace, setzer_override);
}

}  // namespace asb
