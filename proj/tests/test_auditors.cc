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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "dpaudit/auditors.h"
#include "dpaudit/ground_truth.h"
#include "dpaudit/mechanisms.h"

namespace dpaudit {
namespace {

MechanismSpec LaplaceSpec(double theta) {
  MechanismSpec spec;
  spec.family = Family::kLaplace;
  spec.params = {theta};
  return spec;
}

MechanismSpec SvtSpec(double theta) {
  MechanismSpec spec;
  spec.family = Family::kSvt;
  spec.params = {theta};
  spec.svt.query_count = 1;
  spec.svt.abort_count = 1;
  spec.svt.thresholds = {1.0};
  return spec;
}

PairSampler LaplacePair(double theta) {
  return MakePairSampler(LaplaceSpec(theta),
                         GenerateInputs(InputPattern::kOneAbove, 1, 1.0));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST_CASE("auditor names round trip") {
  for (Auditor a : {Auditor::kDpSniper, Auditor::kMpl, Auditor::kDeltaSiege,
                    Auditor::kDpsgdAudit}) {
    CHECK(AuditorFromName(AuditorName(a)) == a);
  }
  CHECK_THROWS_AS(AuditorFromName("oracle"), std::invalid_argument);
}

TEST_CASE("auditor sources never touch the analytical oracle") {
  // Auditors receive sampler handles only. The compilation units they are
  // built from must not include the oracle or ground-truth headers.
  for (const char* path : {"/src/auditors.cc", "/src/estimators.cc",
                           "/include/dpaudit/auditors.h",
                           "/include/dpaudit/estimators.h"}) {
    const std::string text = ReadFile(std::string(DPAUDIT_SOURCE_DIR) + path);
    CHECK(text.find("oracle.h") == std::string::npos);
    CHECK(text.find("ground_truth.h") == std::string::npos);
  }
}

TEST_CASE("ratio classifier audit is tight below the floor crossover") {
  DpSniperConfig config;
  config.c = 0.05;
  config.n_train = config.n_est = 100000;
  const PowerEstimate est = DpSniperAudit(LaplacePair(2.0), config);
  CHECK(est.xi_star == doctest::Approx(2.0).epsilon(0.075));
  CHECK(est.ci_low <= est.xi_star);
  CHECK(est.ci_low <= 2.0 + 0.05);
  CHECK(est.sample_count == 5 * config.n_est);
}

TEST_CASE("ratio classifier audit saturates past the floor crossover") {
  DpSniperConfig config;
  config.c = 0.05;
  config.n_train = config.n_est = 100000;
  const PowerEstimate est = DpSniperAudit(LaplacePair(6.0), config);
  // theta = 6 sits past -ln(2c): the floored value, not theta, is reported.
  const double expected =
      std::log(1.0 - std::exp(-6.0) / (4.0 * config.c)) - std::log(config.c);
  CHECK(est.xi_star == doctest::Approx(expected).epsilon(0.05));
  CHECK(est.xi_star < 6.0 - 2.0);
}

TEST_CASE("ratio classifier witness is calibrated to the floor") {
  DpSniperConfig config;
  config.c = 0.05;
  config.n_train = config.n_est = 100000;
  const MechanismSpec spec = LaplaceSpec(2.0);
  const auto pair = GenerateInputs(InputPattern::kOneAbove, 1, 1.0);
  const PowerEstimate est =
      DpSniperAudit(MakePairSampler(spec, pair), config);
  const Sampler neighbor = MakeSampler(spec, pair.q_a_prime);
  double hits = 0.0;
  const size_t n = 100000;
  for (size_t i = 0; i < n; ++i) {
    hits += est.witness.Membership(neighbor(900000 + i));
  }
  // Fresh-draw frequency of the calibrated witness: 4 sigma around c plus
  // the calibration set's own 4-sigma band.
  const double sigma = std::sqrt(config.c * (1.0 - config.c) / n);
  CHECK(std::fabs(hits / n - config.c) <= 8.0 * sigma);
}

TEST_CASE("ratio classifier audit reports nothing on identical inputs") {
  DpSniperConfig config;
  config.c = 0.05;
  config.n_train = config.n_est = 50000;
  const MechanismSpec spec = LaplaceSpec(1.0);
  PairSampler same;
  same.a = MakeSampler(spec, {1.0});
  same.a_prime = MakeSampler(spec, {1.0});
  const PowerEstimate est = DpSniperAudit(same, config);
  CHECK(est.ci_low <= 0.05);
}

TEST_CASE("ratio classifier audit works on discrete outputs") {
  DpSniperConfig config;
  config.c = 0.05;
  config.n_train = config.n_est = 100000;
  const MechanismSpec spec = SvtSpec(6.0);
  AdjacentPair pair;
  pair.q_a = {1.0};
  pair.q_a_prime = {0.0};
  pair.pattern = InputPattern::kOneBelow;
  const PowerEstimate est = DpSniperAudit(MakePairSampler(spec, pair), config);
  const double eps_star = TrueEpsilonOf(spec, 0.0).value;
  // Top mass under the neighbor exceeds the floor here, so the audit is tight.
  CHECK(est.xi_star == doctest::Approx(eps_star).epsilon(0.1));
  CHECK(est.witness.use_elements);
}

TEST_CASE("density ratio audit is tight on the benchmark") {
  MplConfig config;
  config.n = 300000;
  const PowerEstimate est = MplAudit(LaplacePair(1.0), config);
  CHECK(est.xi_star == doctest::Approx(1.0).epsilon(0.15));
  CHECK(est.ci_low <= est.xi_star);
}

TEST_CASE("density ratio audit reports nothing on identical inputs") {
  MplConfig config;
  config.n = 200000;
  const MechanismSpec spec = LaplaceSpec(1.0);
  PairSampler same;
  same.a = MakeSampler(spec, {1.0});
  same.a_prime = MakeSampler(spec, {1.0});
  const PowerEstimate est = MplAudit(same, config);
  CHECK(est.ci_low <= 0.05);
}

TEST_CASE("density ratio audit handles discrete output classes") {
  MplConfig config;
  config.n = 100000;
  const MechanismSpec spec = SvtSpec(6.0);
  AdjacentPair pair;
  pair.q_a = {1.0};
  pair.q_a_prime = {0.0};
  const PowerEstimate est = MplAudit(MakePairSampler(spec, pair), config);
  // Two output classes; the larger log ratio is the true epsilon.
  CHECK(est.xi_star ==
        doctest::Approx(TrueEpsilonOf(spec, 0.0).value).epsilon(0.05));
}

TEST_CASE("surrogate functions validate monotonicity") {
  CHECK(SurrogateFn::InverseEpsDelta()(0.0, 0.5) == doctest::Approx(2.0));
  CHECK(SurrogateFn::ScaleOverEps(2.0)(4.0, 0.1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(SurrogateFn::ScaleOverEps(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(
      SurrogateFn::FromFunction([](double e, double) { return e; },
                                "increasing"),
      std::invalid_argument);
}

TEST_CASE("surrogate minimizing audit is invariant to monotone rescaling") {
  MechanismSpec spec;
  spec.family = Family::kGaussian;
  spec.params = {0.466164966};
  const auto pair = GenerateInputs(InputPattern::kOneAbove, 1, 1.0);
  DeltaSiegeConfig config;
  config.delta_c = 0.05;
  config.n = 15000;
  config.runs = 2;
  const PowerEstimate base = DeltaSiegeAudit(
      MakePairSampler(spec, pair), SurrogateFn::InverseEpsDelta(), config);
  const SurrogateFn rescaled = SurrogateFn::FromFunction(
      [](double eps, double delta) {
        if (delta <= 0.0) return HUGE_VAL;
        return std::sqrt(std::exp(-eps) / delta);
      },
      "sqrt_inv_eps_delta");
  const PowerEstimate other =
      DeltaSiegeAudit(MakePairSampler(spec, pair), rescaled, config);
  // A strictly increasing transform of the surrogate preserves the argmin
  // threshold and therefore the solved power.
  CHECK(other.xi_star == doctest::Approx(base.xi_star).epsilon(1e-6));
  CHECK(other.alpha == doctest::Approx(base.alpha).epsilon(1e-9));
  CHECK(other.beta == doctest::Approx(base.beta).epsilon(1e-9));
  CHECK(base.xi_star > 3.5);
  CHECK(base.xi_star < 5.5);
}

TEST_CASE("interval audit brackets zero on pure noise") {
  MechanismSpec spec;
  spec.family = Family::kDpsgdOneStep;
  spec.params = {100.0};
  const auto pair = GenerateInputs(InputPattern::kOneBelow, 1, 1.0);
  DpsgdAuditConfig config;
  config.delta_c = 1e-4;
  config.n = 5000;
  const PowerEstimate est =
      DpsgdAudit(MakePairSampler(spec, pair), config);
  CHECK(est.ci_low <= 0.1);
  CHECK(est.ci_high >= 0.0);
  CHECK(est.witness.use_interval);
}

TEST_CASE("interval audit detects a separated pair") {
  MechanismSpec spec;
  spec.family = Family::kDpsgdOneStep;
  spec.params = {0.958716721};
  const auto pair = GenerateInputs(InputPattern::kOneBelow, 1, 1.0);
  DpsgdAuditConfig config;
  config.delta_c = 1e-4;
  config.n = 10000;
  const PowerEstimate est =
      DpsgdAudit(MakePairSampler(spec, pair), config);
  CHECK(est.xi_star > 1.0);
  CHECK(est.ci_low <= est.xi_star);
  CHECK(est.ci_high >= est.xi_star);
  CHECK(est.ci_low <= TrueEpsilonOf(spec, config.delta_c).value + 0.05);
}

}  // namespace
}  // namespace dpaudit
