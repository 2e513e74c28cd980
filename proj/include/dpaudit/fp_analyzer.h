// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPAUDIT_FP_ANALYZER_H_
#define DPAUDIT_FP_ANALYZER_H_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpaudit/auditors.h"
#include "dpaudit/mechanisms.h"

namespace dpaudit {

// Closed-form parameter regions where an audit misclassifies a mechanism,
// verdict classification, and end-to-end attack construction.

enum class Verdict { kTruePositive, kTrueNegative, kFalsePositive, kFalseNegative };

std::string VerdictName(Verdict verdict);

struct AuditVerdict {
  Verdict verdict = Verdict::kTrueNegative;
  double eps_c = 0.0;
  double eps_star = 0.0;
  double xi_star = 0.0;
  // True when the audit reports more power than the mechanism leaks
  // (eps_star < xi_star); the verdict is still assigned.
  bool infeasible = false;
};

// Pure quadrant classification. A false positive is a violated claim that
// passes the audit: xi_star <= eps_c < eps_star. A false negative is a kept
// claim the audit rejects: xi_star > eps_c >= eps_star. The remaining corner
// with every comparison at equality counts as a true positive.
AuditVerdict Classify(double eps_c, double eps_star, double xi_star);

// A set of mechanism parameters, cut out by labeled inequalities. For
// one-parameter families the resolved interval (lo, hi] is also exposed;
// hi may be +infinity when the upper constraint is vacuous.
struct ParamRegion {
  Family family = Family::kLaplace;
  std::string theorem_id;
  std::vector<std::string> labels;
  // Evaluates every labeled inequality at a parameter vector.
  std::function<std::vector<bool>(const std::vector<double>&)> check;
  // Draws a parameter at the given relative distance inside every boundary,
  // or reports emptiness.
  std::function<std::optional<std::vector<double>>(double margin)> draw;

  bool has_interval = false;
  double lo = 0.0;
  double hi = 0.0;

  bool Contains(const std::vector<double>& params) const;
  // Draws and re-checks every inequality; throws std::logic_error if the
  // drawn parameter violates one.
  std::optional<std::vector<double>> Sample(double margin = 0.02) const;
};

// Closed-form audit powers of the probability-floor ratio audit on the
// benchmark families: tight below the floor crossover, floored beyond it.
double LaplaceSniperPowerFormula(double theta, double c);
double SvtSniperPowerFormula(double theta, double c);
double RapporSniperPowerFormula(double theta, double c, int h);

// Benchmark Laplace against the ratio-classifier audit with probability
// floor c: theta in (max(-ln(2c), eps_c), hi], where hi solves
// ln(1 - e^{-theta}/(4c)) - ln(c) = eps_c, or +infinity when that audit
// power never reaches eps_c (e^{eps_c} c >= 1).
ParamRegion LaplaceSniperRegion(double c, double eps_c);

// Adapted Laplace (exponential core, constant tail) against the same audit.
// Region over (theta1, theta2); the draw fixes theta1 = eps_c / 2 and solves
// the branch inequality for theta2.
ParamRegion AdaptedLaplaceSniperParams(double c, double eps_c);

// Benchmark SVT (N = 1, t-bar = 1) against the same audit. Region over theta.
ParamRegion SvtSniperRegion(double c, double eps_c);

// Adapted SVT against the same audit. Region over (theta1, theta2); the draw
// fixes theta2 = eps_c + margin_above and solves for theta1.
ParamRegion AdaptedSvtSniperParams(double c, double eps_c,
                                   double margin_above = 0.5);

// Adapted Laplace against the density-ratio audit with floor tau:
// the apparent rate theta in (0, eps_c].
ParamRegion AdaptedLaplaceMplParams(double tau, double eps_c);

// Adapted SVT against the density-ratio audit with floor tau.
ParamRegion AdaptedSvtMplParams(double tau, double eps_c,
                                double margin_above = 0.5);

// Benchmark one-time RAPPOR (h hash functions) against the ratio-classifier
// audit. Region over the flip probability theta in (0, 1).
ParamRegion RapporSniperRegion(double c, double eps_c, int h);

// Benchmark Gaussian against the surrogate-minimizing audit. Returns the
// false-positive and false-negative regions over theta; rho must be
// non-increasing in both arguments (the argmin structure is invariant under
// strictly increasing reparameterizations of rho).
struct RegionPair {
  ParamRegion fp;
  ParamRegion fn;
};
RegionPair GaussianDeltaSiegeRegions(double c, double delta_c, double eps_c,
                                     const SurrogateFn& rho);

// The audit power the surrogate-minimizing audit converges to on the
// benchmark Gaussian: xi*(theta) with rho(xi*, delta_c) = min over feasible
// (alpha, eps) of rho(eps, 1 - beta(alpha) - alpha e^eps).
double GaussianDeltaSiegePower(double theta, double sensitivity, double c,
                               double delta_c, const SurrogateFn& rho);

// One-step DPSGD against the interval audit with probability floor c:
// ln(1 - delta_c - beta(c)) - ln(c) <= eps_c < T^{-1}(delta_c) over the
// noise multiplier theta.
ParamRegion DpsgdFpRegion(double c, double delta_c, double eps_c,
                          const DpsgdConfig& dpsgd);

// Raised when no parameter region yields an attack for the requested claim.
struct AttackUnavailableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for (family, auditor) combinations with no region solver.
struct UnsupportedCombinationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AttackPlan {
  MechanismSpec spec;
  double eps_c = 0.0;
  double delta_c = 0.0;
  Auditor auditor = Auditor::kDpSniper;
  std::string theorem_id;
  double margin = 0.0;
  std::string ToJson() const;
};

struct AttackRequest {
  Family family = Family::kLaplace;
  Auditor auditor = Auditor::kDpSniper;
  double eps_c = 1.0;
  double delta_c = 0.0;
  double c = 0.05;     // probability floor of the target audit
  double tau = 1e-4;   // density floor of the target audit
  double margin = 0.02;
};

// Picks a mechanism the requested audit will pass even though the mechanism
// violates the claim: a benchmark-family parameter if its region is
// nonempty, otherwise an adapted variant. Throws AttackUnavailableError when
// both regions are empty and UnsupportedCombinationError when no solver
// covers the combination.
AttackPlan ConstructAttack(const AttackRequest& request);

}  // namespace dpaudit

#endif  // DPAUDIT_FP_ANALYZER_H_
