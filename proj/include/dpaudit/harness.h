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

#ifndef DPAUDIT_HARNESS_H_
#define DPAUDIT_HARNESS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpaudit/auditors.h"
#include "dpaudit/fp_analyzer.h"
#include "dpaudit/mechanisms.h"

namespace dpaudit {

// Experiment plumbing: configuration, the sample cache, audit reports, and
// the data series behind the shipped experiment set.

struct ExperimentConfig {
  MechanismSpec mechanism;                 // family, config; params from grid
  std::vector<std::vector<double>> grid;   // parameter vectors to sweep
  InputPattern pattern = InputPattern::kOneAbove;
  Auditor auditor = Auditor::kDpSniper;
  double eps_c = 1.0;
  double delta_c = 0.0;
  uint64_t seed = 1;

  DpSniperConfig sniper;
  MplConfig mpl;
  DeltaSiegeConfig siege;
  std::string rho = "inv_eps_delta";
  DpsgdAuditConfig dpsgd_audit;

  void Validate() const;
  std::string ToJson() const;
  static ExperimentConfig FromJson(const std::string& text);
  uint64_t Hash() const;
};

SurrogateFn SurrogateFromName(const std::string& name);

// Query-vector length the input patterns use for this mechanism.
int InputDimension(const MechanismSpec& spec);

struct AuditRecord {
  std::vector<double> params;
  PowerEstimate estimate;
  double eps_star = 0.0;  // +infinity when the family satisfies no DP
  bool eps_star_lower_bound_only = false;
  AuditVerdict verdict;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
};

struct AuditReport {
  std::vector<AuditRecord> records;
  // Pre-rendered CSV rows, one per record, in grid order.
  std::string csv_body;
  std::string ToCsv() const;
};

// Runs the configured auditor over the parameter grid, joins ground truth,
// and classifies verdicts. Grid points run on a worker pool.
AuditReport RunAudit(const ExperimentConfig& config);

// Raised when a cache file exists but holds different bytes than a fresh
// deterministic draw would produce.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes the batch for (spec, input, seed0, n) under dir, named by content
// identity. Re-writing is idempotent; a colliding file with different bytes
// raises IntegrityError. Returns the file path.
std::string WriteSampleCache(const std::string& dir, const MechanismSpec& spec,
                             const std::vector<double>& input, uint64_t seed0,
                             size_t n);

std::vector<OutputSample> ReadSampleCache(const std::string& path);

// Emits the CSV data series behind one shipped experiment. Known ids:
// fig5, fig6, fig7, fig8, fig9, table6, fig11. budget_scale scales every
// sample budget (1.0 reproduces the defaults). Throws std::invalid_argument
// for unknown ids.
std::string ReproduceSeries(const std::string& figure_id, double budget_scale,
                            uint64_t seed);

// CSV boundary table of a one-parameter region plus the labeled conditions.
std::string RegionCsv(const ParamRegion& region);

}  // namespace dpaudit

#endif  // DPAUDIT_HARNESS_H_
