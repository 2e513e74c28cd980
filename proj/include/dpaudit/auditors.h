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

#ifndef DPAUDIT_AUDITORS_H_
#define DPAUDIT_AUDITORS_H_

#include <functional>
#include <string>

#include "dpaudit/mechanisms.h"
#include "dpaudit/witness.h"

namespace dpaudit {

// Blackbox auditors. Every procedure here consumes only PairSampler handles;
// none of this code may touch the analytical oracle.

enum class Auditor { kDpSniper, kMpl, kDeltaSiege, kDpsgdAudit };

std::string AuditorName(Auditor auditor);
Auditor AuditorFromName(const std::string& name);

struct DpSniperConfig {
  double c = 0.05;           // probability floor
  size_t n_train = 1000000;  // per input, classifier training
  size_t n_est = 1000000;    // per input, calibration and estimation
  double confidence = 0.95;  // one-sided lower bound level
  uint64_t seed = 1;
};

// Trains a likelihood-ratio discriminator, calibrates a (t, q) witness so the
// empirical Pr[M(a') in S] equals c, then estimates the power
// xi* = ln Pr_{>=c}[M(a) in S] - ln Pr_{>=c}[M(a') in S] on fresh samples.
PowerEstimate DpSniperAudit(const PairSampler& sampler,
                            const DpSniperConfig& config);

struct MplConfig {
  double tau = 1e-4;         // density floor
  size_t n = 3000000;        // per input
  double confidence = 0.95;  // one-sided lower bound level
  int bootstrap = 200;
  double bandwidth = 0.0;  // 0 selects Silverman's rule
  uint64_t seed = 1;
};

// Density-ratio argmax audit: fits density estimates for both inputs,
// maximizes |ln(p_{>=tau}(b|a) / p_{>=tau}(b|a'))| over a candidate grid,
// and bootstraps a one-sided lower bound. Selection and estimation use
// disjoint halves of the budget so the argmax does not bias the estimate.
PowerEstimate MplAudit(const PairSampler& sampler, const MplConfig& config);

// A privacy surrogate rho(epsilon, delta): non-increasing in both arguments,
// grid-checked on construction.
class SurrogateFn {
 public:
  using Fn = std::function<double(double, double)>;

  // rho = 1 / (e^eps * delta).
  static SurrogateFn InverseEpsDelta();
  // rho = scale / eps.
  static SurrogateFn ScaleOverEps(double scale);
  // rho = e^{-k eps} / delta.
  static SurrogateFn ExpOverDelta(double k);
  static SurrogateFn FromFunction(Fn fn, std::string name);

  double operator()(double eps, double delta) const { return fn_(eps, delta); }
  const std::string& name() const { return name_; }

 private:
  SurrogateFn(Fn fn, std::string name);
  Fn fn_;
  std::string name_;
};

struct DeltaSiegeConfig {
  double delta_c = 0.0;
  double c = 0.01;          // type I error floor: only alpha > c is swept
  size_t n = 15000;         // per input, per run
  int runs = 5;             // independent runs; the max power is reported
  double confidence = 0.90;  // one-sided level of the per-run bounds
  uint64_t seed = 1;
};

// Surrogate-minimizing audit: for each score threshold it bounds the witness
// line delta = 1 - beta - alpha e^eps with one-sided binomial bounds,
// minimizes rho along the line, and converts the global minimum rho* back to
// a power via rho(xi*, delta_c) = rho*.
PowerEstimate DeltaSiegeAudit(const PairSampler& sampler, const SurrogateFn& rho,
                              const DeltaSiegeConfig& config);

struct DpsgdAuditConfig {
  double delta_c = 0.0;
  double c = 0.02;  // probability floor applied inside both branches
  size_t n = 10000;
  double significance = 0.03;  // two-sided interval significance
  uint64_t seed = 1;
};

// Threshold sweep on the scalar statistic, scoring each threshold with the
// two-branch power
//   max{ln((Pr[a in S] - delta_c) / Pr[a' in S]),
//       ln((1 - Pr[a' in S] - delta_c) / (1 - Pr[a in S]))}
// and attaching a two-sided Bayesian interval at the maximizer.
PowerEstimate DpsgdAudit(const PairSampler& sampler,
                         const DpsgdAuditConfig& config);

}  // namespace dpaudit

#endif  // DPAUDIT_AUDITORS_H_
