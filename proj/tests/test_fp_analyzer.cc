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
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dpaudit/fp_analyzer.h"
#include "dpaudit/ground_truth.h"
#include "dpaudit/oracle.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool AllTrue(const std::vector<bool>& v) {
  for (bool b : v) {
    if (!b) return false;
  }
  return true;
}

TEST_CASE("verdict classification quadrants") {
  CHECK(Classify(1.0, 2.0, 0.8).verdict == Verdict::kFalsePositive);
  CHECK(Classify(1.0, 0.5, 1.3).verdict == Verdict::kFalseNegative);
  CHECK(Classify(2.0, 2.0, 2.0).verdict == Verdict::kTruePositive);
  CHECK(Classify(1.0, 0.5, 0.7).verdict == Verdict::kTrueNegative);
  CHECK(Classify(3.0, 5.0, 4.0).verdict == Verdict::kTruePositive);
  CHECK(Classify(1.0, kInf, 0.5).verdict == Verdict::kFalsePositive);
  // Boundary tie rules: the floor comparison is inclusive on xi.
  CHECK(Classify(1.0, 2.0, 1.0).verdict == Verdict::kFalsePositive);
  CHECK(Classify(1.0, 1.0, 1.5).verdict == Verdict::kFalseNegative);
  const AuditVerdict infeasible = Classify(1.0, 2.0, 3.0);
  CHECK(infeasible.infeasible);
  CHECK_FALSE(Classify(1.0, 2.0, 0.8).infeasible);
  CHECK(VerdictName(Verdict::kFalsePositive) == "FP");
  CHECK(VerdictName(Verdict::kTrueNegative) == "TN");
}

TEST_CASE("laplace region against the ratio classifier audit") {
  const ParamRegion unbounded = LaplaceSniperRegion(0.05, 3.0);
  REQUIRE(unbounded.has_interval);
  CHECK(unbounded.lo == doctest::Approx(3.0));
  CHECK(std::isinf(unbounded.hi));
  CHECK(unbounded.Contains({3.5}));
  CHECK(unbounded.Contains({8.0}));
  CHECK_FALSE(unbounded.Contains({2.9}));
  CHECK_FALSE(unbounded.Contains({1.5}));  // below the floor crossover too

  const ParamRegion bounded = LaplaceSniperRegion(0.01, 4.0);
  REQUIRE(bounded.has_interval);
  CHECK(bounded.lo == doctest::Approx(4.0));
  const double hi = -std::log(4.0 * 0.01 - 4.0 * 0.01 * 0.01 * std::exp(4.0));
  CHECK(bounded.hi == doctest::Approx(hi).epsilon(1e-6));
  CHECK(bounded.Contains({4.004}));
  CHECK_FALSE(bounded.Contains({3.95}));
  CHECK_FALSE(bounded.Contains({4.05}));
  const auto drawn = bounded.Sample();
  REQUIRE(drawn.has_value());
  CHECK(AllTrue(bounded.check(*drawn)));
}

TEST_CASE("drawn laplace parameters are genuine false positives") {
  const double c = 0.05;
  const double eps_c = 3.0;
  const ParamRegion region = LaplaceSniperRegion(c, eps_c);
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  const double theta = (*drawn)[0];
  MechanismSpec spec;
  spec.family = Family::kLaplace;
  spec.params = {theta};
  const double eps_star = TrueEpsilonOf(spec, 0.0).value;
  const double xi = LaplaceSniperPowerFormula(theta, c);
  CHECK(Classify(eps_c, eps_star, xi).verdict == Verdict::kFalsePositive);
}

TEST_CASE("laplace audit power formula splits at the floor crossover") {
  const double c = 0.05;
  const double crossover = -std::log(2.0 * c);
  CHECK(LaplaceSniperPowerFormula(1.5, c) == doctest::Approx(1.5));
  CHECK(LaplaceSniperPowerFormula(crossover - 1e-9, c) ==
        doctest::Approx(crossover).epsilon(1e-6));
  const double past = LaplaceSniperPowerFormula(6.0, c);
  CHECK(past == doctest::Approx(std::log(1.0 - std::exp(-6.0) / (4.0 * c)) -
                                std::log(c)));
  CHECK(past < 6.0);
  // The floored value approaches -ln(c) from below as theta grows.
  CHECK(LaplaceSniperPowerFormula(12.0, c) < -std::log(c));
  CHECK(LaplaceSniperPowerFormula(12.0, c) >
        LaplaceSniperPowerFormula(6.0, c));
}

TEST_CASE("adapted laplace region solves the branch inequality") {
  const ParamRegion region = AdaptedLaplaceSniperParams(0.01, 2.0);
  // Branch with theta1 = 1: the bound is e^{-t2} <= 2 (e^2 - e) c.
  const double t2_min = -std::log(2.0 * 0.01 * (std::exp(2.0) - std::exp(1.0)));
  CHECK(AllTrue(region.check({1.0, t2_min + 0.05})));
  CHECK_FALSE(AllTrue(region.check({1.0, t2_min - 0.05})));
  CHECK_FALSE(AllTrue(region.check({2.5, 10.0})));  // theta1 >= eps_c
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  CHECK((*drawn)[0] == doctest::Approx(1.0));  // eps_c / 2
  CHECK(AllTrue(region.check(*drawn)));
}

TEST_CASE("svt region is empty below the floored power") {
  // For c = 0.01 the floored audit value exceeds 3.9, so smaller claims
  // admit no benchmark parameter.
  CHECK_FALSE(SvtSniperRegion(0.01, 0.5).Sample().has_value());
  CHECK_FALSE(SvtSniperRegion(0.05, 0.6).Sample().has_value());
  const ParamRegion region = SvtSniperRegion(0.01, 4.2);
  REQUIRE(region.has_interval);
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  const double theta = (*drawn)[0];
  MechanismSpec spec;
  spec.family = Family::kSvt;
  spec.params = {theta};
  spec.svt.query_count = 1;
  spec.svt.abort_count = 1;
  spec.svt.thresholds = {1.0};
  const double eps_star = TrueEpsilonOf(spec, 0.0).value;
  CHECK(eps_star > 4.2);
  CHECK(SvtSniperPowerFormula(theta, 0.01) <= 4.2);
}

TEST_CASE("svt audit power formula is continuous at the mass crossover") {
  const double c = 0.01;
  // Find theta where the top-answer mass hits the floor.
  double lo = 1.0;
  double hi = 40.0;
  auto mass = [](double th) {
    return 2.0 / 3.0 * std::exp(-th / 4.0) - 1.0 / 6.0 * std::exp(-th / 2.0);
  };
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) > c ? lo : hi) = mid;
  }
  const double cross = 0.5 * (lo + hi);
  CHECK(SvtSniperPowerFormula(cross - 1e-6, c) ==
        doctest::Approx(SvtSniperPowerFormula(cross + 1e-6, c)).epsilon(1e-4));
  // Tight branch reports the true epsilon.
  CHECK(SvtSniperPowerFormula(6.0, c) ==
        doctest::Approx(-std::log(2.0 * mass(6.0))));
}

TEST_CASE("adapted svt region uses the rare output set") {
  const double c = 0.01;
  const double eps_c = 1.0;
  const ParamRegion region = AdaptedSvtSniperParams(c, eps_c);
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  const double t1 = (*drawn)[0];
  const double t2 = (*drawn)[1];
  CHECK(t2 == doctest::Approx(eps_c + 0.5));
  CHECK(AdaptedSvtRareMass(t1, t2) < c);
  CHECK(AllTrue(region.check({t1, t2})));
  CHECK_FALSE(AllTrue(region.check({t1, eps_c - 0.1})));  // claim not violated
}

TEST_CASE("adapted svt rare set mass follows the closed form") {
  for (double t1 : {0.5, 1.0, 2.0}) {
    for (double t2 : {1.0, 2.5}) {
      const double f = (std::exp(-t1 * t2) - std::exp(-2.0 * t1 * t2)) /
                       (t1 * t2);
      CHECK(AdaptedSvtF(t1, t2) == doctest::Approx(f).epsilon(1e-12));
      CHECK(AdaptedSvtRareMass(t1, t2) ==
            doctest::Approx(std::exp(-t2) * f / 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("density ratio audit regions") {
  const ParamRegion lap = AdaptedLaplaceMplParams(1e-4, 1.0);
  CHECK(AllTrue(lap.check({1.0})));
  CHECK_FALSE(AllTrue(lap.check({1.01})));
  const auto drawn = lap.Sample();
  REQUIRE(drawn.has_value());
  CHECK((*drawn)[0] <= 1.0);
  CHECK((*drawn)[0] > 0.0);

  const ParamRegion svt = AdaptedSvtMplParams(1e-4, 1.0);
  const auto svt_drawn = svt.Sample();
  REQUIRE(svt_drawn.has_value());
  const double t1 = (*svt_drawn)[0];
  const double t2 = (*svt_drawn)[1];
  const double g = AdaptedSvtRareMass(t1, t2);
  CHECK(g < 1e-4);
  CHECK(t2 > 1.0);
  CHECK(std::exp(t2) * g <= std::exp(1.0) * 1e-4);
}

TEST_CASE("rappor region brackets the flip probability") {
  const ParamRegion region = RapporSniperRegion(0.05, 2.0, 2);
  REQUIRE(region.has_interval);
  CHECK(region.lo == doctest::Approx(0.653425).epsilon(1e-4));
  CHECK(region.hi == doctest::Approx(0.755081).epsilon(1e-4));
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  const double theta = (*drawn)[0];
  // Inside the region the true epsilon still exceeds the claim.
  CHECK(4.0 * (std::log(1.0 - theta / 2.0) - std::log(theta / 2.0)) > 2.0);
  // Near-uniform responses keep no claim violated at all.
  CHECK_FALSE(region.Contains({0.999}));
}

TEST_CASE("gaussian surrogate regions and their invariance") {
  const SurrogateFn rho = SurrogateFn::InverseEpsDelta();
  const RegionPair regions = GaussianDeltaSiegeRegions(0.01, 0.05, 4.8, rho);
  REQUIRE(regions.fp.has_interval);
  CHECK(regions.fp.lo == doctest::Approx(0.433139).epsilon(1e-3));
  CHECK(regions.fp.hi == doctest::Approx(0.484679).epsilon(1e-3));
  const auto drawn = regions.fp.Sample();
  REQUIRE(drawn.has_value());
  MechanismSpec spec;
  spec.family = Family::kGaussian;
  spec.params = *drawn;
  CHECK(TrueEpsilonOf(spec, 0.05).value > 4.8);
  CHECK(GaussianDeltaSiegePower((*drawn)[0], 1.0, 0.01, 0.05, rho) <= 4.8);

  const SurrogateFn rescaled = SurrogateFn::FromFunction(
      [](double eps, double delta) {
        if (delta <= 0.0) return HUGE_VAL;
        return std::log1p(std::exp(-eps) / delta);
      },
      "log1p_inv_eps_delta");
  const RegionPair other = GaussianDeltaSiegeRegions(0.01, 0.05, 4.8, rescaled);
  CHECK(other.fp.lo == doctest::Approx(regions.fp.lo).epsilon(1e-6));
  CHECK(other.fp.hi == doctest::Approx(regions.fp.hi).epsilon(1e-6));
}

TEST_CASE("one step gradient region matches its two conditions") {
  const DpsgdConfig dpsgd;
  const ParamRegion region = DpsgdFpRegion(0.02, 1e-4, 3.5, dpsgd);
  REQUIRE(region.has_interval);
  const auto drawn = region.Sample();
  REQUIRE(drawn.has_value());
  MechanismSpec spec;
  spec.family = Family::kDpsgdOneStep;
  spec.params = *drawn;
  spec.dpsgd = dpsgd;
  spec.sensitivity = dpsgd.clip_norm;
  const double eps_star = TrueEpsilonOf(spec, 1e-4).value;
  CHECK(eps_star > 3.5);
  const double beta = Tradeoff(TradeoffOf(spec), 0.02);
  CHECK(std::log(1.0 - 1e-4 - beta) - std::log(0.02) <= 3.5);
  // The noise multiplier giving eps_star = 4 sits inside this region.
  CHECK(region.Contains({0.958716721}));
}

TEST_CASE("attack construction picks benchmark or adapted specs") {
  AttackRequest laplace;
  laplace.family = Family::kLaplace;
  laplace.auditor = Auditor::kDpSniper;
  laplace.eps_c = 3.0;
  laplace.c = 0.05;
  const AttackPlan lap_plan = ConstructAttack(laplace);
  CHECK(lap_plan.spec.family == Family::kLaplace);
  CHECK(lap_plan.spec.params[0] > 3.0);
  CHECK(TrueEpsilonOf(lap_plan.spec, 0.0).value > 3.0);
  CHECK(LaplaceSniperPowerFormula(lap_plan.spec.params[0], 0.05) <= 3.0);

  AttackRequest svt;
  svt.family = Family::kSvt;
  svt.auditor = Auditor::kDpSniper;
  svt.eps_c = 0.1;
  svt.c = 0.01;
  // The benchmark region is empty at a small claim; the adapted family
  // steps in.
  const AttackPlan svt_plan = ConstructAttack(svt);
  CHECK(svt_plan.spec.family == Family::kAdaptedSvt);
  CHECK(svt_plan.spec.params[1] > 0.1);

  AttackRequest mpl;
  mpl.family = Family::kLaplace;
  mpl.auditor = Auditor::kMpl;
  mpl.eps_c = 1.0;
  mpl.tau = 1e-4;
  const AttackPlan mpl_plan = ConstructAttack(mpl);
  CHECK(mpl_plan.spec.family == Family::kAdaptedLaplace);
  CHECK(mpl_plan.spec.params[0] <= 1.0);

  AttackRequest unsupported;
  unsupported.family = Family::kRapporOneTime;
  unsupported.auditor = Auditor::kMpl;
  CHECK_THROWS_AS(ConstructAttack(unsupported), UnsupportedCombinationError);
}

TEST_CASE("attack manifests serialize as structured records") {
  AttackRequest request;
  request.family = Family::kLaplace;
  request.auditor = Auditor::kDpSniper;
  request.eps_c = 3.0;
  request.c = 0.05;
  const AttackPlan plan = ConstructAttack(request);
  const auto j = nlohmann::json::parse(plan.ToJson());
  CHECK(j.contains("mechanism"));
  CHECK(j.contains("theorem"));
  CHECK(j.at("eps_c").get<double>() == doctest::Approx(3.0));
  CHECK(j.at("auditor").get<std::string>() == "dpsniper");
}

}  // namespace
}  // namespace dpaudit
