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
#include <set>
#include <stdexcept>

#include "dpaudit/mechanisms.h"
#include "dpaudit/oracle.h"

namespace dpaudit {
namespace {

MechanismSpec LaplaceSpec(double theta) {
  MechanismSpec spec;
  spec.family = Family::kLaplace;
  spec.params = {theta};
  return spec;
}

MechanismSpec SvtSpec(double theta, int queries = 1) {
  MechanismSpec spec;
  spec.family = Family::kSvt;
  spec.params = {theta};
  spec.svt.query_count = queries;
  spec.svt.abort_count = 1;
  spec.svt.thresholds.assign(queries, 1.0);
  return spec;
}

TEST_CASE("family names round trip") {
  for (Family f : {Family::kLaplace, Family::kAdaptedLaplace, Family::kSvt,
                   Family::kAdaptedSvt, Family::kRapporOneTime,
                   Family::kGaussian, Family::kDpsgdOneStep}) {
    CHECK(FamilyFromName(FamilyName(f)) == f);
  }
  CHECK_THROWS_AS(FamilyFromName("nope"), std::invalid_argument);
}

TEST_CASE("pattern names round trip") {
  for (InputPattern p :
       {InputPattern::kOneAbove, InputPattern::kOneBelow,
        InputPattern::kOneBelowRestAbove, InputPattern::kHalfHalf,
        InputPattern::kAllAboveAllBelow, InputPattern::kXShape}) {
    CHECK(PatternFromName(PatternName(p)) == p);
  }
  CHECK_THROWS_AS(PatternFromName("diagonal"), std::invalid_argument);
}

TEST_CASE("spec validation rejects bad parameter vectors") {
  CHECK_THROWS_AS(LaplaceSpec(-1.0).Validate(), std::invalid_argument);
  CHECK_THROWS_AS(LaplaceSpec(0.0).Validate(), std::invalid_argument);
  MechanismSpec two = LaplaceSpec(1.0);
  two.params = {1.0, 2.0};
  CHECK_THROWS_AS(two.Validate(), std::invalid_argument);
  MechanismSpec svt = SvtSpec(2.0);
  svt.svt.thresholds.clear();
  CHECK_THROWS_AS(svt.Validate(), std::invalid_argument);
  MechanismSpec rappor;
  rappor.family = Family::kRapporOneTime;
  rappor.params = {1.5};
  CHECK_THROWS_AS(rappor.Validate(), std::invalid_argument);
  rappor.params = {0.5};
  rappor.rappor.filter_size = 2;
  rappor.rappor.hash_count = 2;
  CHECK_THROWS_AS(rappor.Validate(), std::invalid_argument);
}

TEST_CASE("spec serialization round trips and hashes stably") {
  MechanismSpec spec = SvtSpec(3.0, 4);
  spec.sensitivity = 2.0;
  const std::string text = spec.ToJson();
  const MechanismSpec back = MechanismSpec::FromJson(text);
  CHECK(back.family == spec.family);
  CHECK(back.params == spec.params);
  CHECK(back.sensitivity == spec.sensitivity);
  CHECK(back.svt.thresholds == spec.svt.thresholds);
  CHECK(back.Hash() == spec.Hash());
  CHECK(LaplaceSpec(1.0).Hash() != LaplaceSpec(2.0).Hash());
}

TEST_CASE("input patterns differ by at most delta per coordinate") {
  const double delta = 0.75;
  for (InputPattern p :
       {InputPattern::kOneAbove, InputPattern::kOneBelow,
        InputPattern::kOneBelowRestAbove, InputPattern::kHalfHalf,
        InputPattern::kAllAboveAllBelow, InputPattern::kXShape}) {
    const AdjacentPair pair = GenerateInputs(p, 6, delta);
    REQUIRE(pair.q_a.size() == 6);
    REQUIRE(pair.q_a_prime.size() == 6);
    bool any = false;
    for (int i = 0; i < 6; ++i) {
      const double d = std::fabs(pair.q_a[i] - pair.q_a_prime[i]);
      CHECK(d <= delta + 1e-12);
      any = any || d > 0.0;
    }
    CHECK(any);
  }
  const AdjacentPair above = GenerateInputs(InputPattern::kOneAbove, 3, 1.0);
  CHECK(above.q_a == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(above.q_a_prime == std::vector<double>{2.0, 1.0, 1.0});
  const AdjacentPair below = GenerateInputs(InputPattern::kOneBelow, 2, 0.5);
  CHECK(below.q_a_prime == std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(GenerateInputs(InputPattern::kOneAbove, 0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("sampling is a pure function of the seed") {
  const MechanismSpec spec = LaplaceSpec(1.5);
  const std::vector<double> input = {1.0};
  CHECK(Sample(spec, input, 7) == Sample(spec, input, 7));
  CHECK_FALSE(Sample(spec, input, 7) == Sample(spec, input, 8));
  const Sampler sampler = MakeSampler(spec, input);
  CHECK(sampler(7) == Sample(spec, input, 7));
  const auto batch1 = DrawBatch(sampler, 100, 5000);
  const auto batch2 = DrawBatch(sampler, 100, 5000);
  REQUIRE(batch1.size() == 5000);
  CHECK(batch1 == batch2);
  CHECK(batch1[17] == sampler(117));
}

TEST_CASE("laplace samples match the oracle cdf") {
  const MechanismSpec spec = LaplaceSpec(1.0);
  const std::vector<double> input = {1.0};
  const Sampler sampler = MakeSampler(spec, input);
  const size_t n = 200000;
  const auto batch = DrawBatch(sampler, 1, n);
  for (double x : {0.0, 1.0, 2.5}) {
    size_t below = 0;
    for (const auto& s : batch) below += s.value <= x;
    const double p = OracleScalarCdf(spec, input, x);
    const double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::fabs(static_cast<double>(below) / n - p) <= 4.0 * sigma);
  }
}

TEST_CASE("svt outputs stop after the abort count") {
  const MechanismSpec spec = SvtSpec(4.0, 8);
  const auto pair = GenerateInputs(InputPattern::kOneBelow, 8, 1.0);
  const Sampler sampler = MakeSampler(spec, pair.q_a);
  for (uint64_t seed = 0; seed < 2000; ++seed) {
    const OutputSample out = sampler(seed);
    REQUIRE(out.kind == OutputKind::kSymbols);
    CHECK(out.vec.size() <= 8);
    int tops = 0;
    for (size_t i = 0; i < out.vec.size(); ++i) {
      CHECK((out.vec[i] == 0 || out.vec[i] == 1));
      tops += out.vec[i];
    }
    CHECK(tops <= 1);
    if (!out.vec.empty() && out.vec.back() != 1) {
      CHECK(out.vec.size() == 8);  // ran through every query without abort
    }
  }
}

TEST_CASE("rappor hash fixing yields disjoint bloom bits") {
  MechanismSpec spec;
  spec.family = Family::kRapporOneTime;
  spec.params = {0.5};
  spec.rappor.filter_size = 12;
  spec.rappor.hash_count = 2;
  AdjacentPair pair = GenerateInputs(InputPattern::kOneAbove, 1, 1.0);
  EnsureRapporPairHashes(spec, pair);
  const auto bits_a = RapporBloomBits(spec, pair.q_a);
  const auto bits_b = RapporBloomBits(spec, pair.q_a_prime);
  std::set<int> all(bits_a.begin(), bits_a.end());
  all.insert(bits_b.begin(), bits_b.end());
  CHECK(all.size() == 4);
  const OutputSample out = MakeSampler(spec, pair.q_a)(3);
  CHECK(out.kind == OutputKind::kBits);
  CHECK(out.vec.size() == 12);
}

TEST_CASE("dpsgd canary shifts the projected mean by the clip norm") {
  MechanismSpec spec;
  spec.family = Family::kDpsgdOneStep;
  spec.params = {1.0};
  spec.dpsgd.clip_norm = 0.7;
  const double with = DpsgdProjectedMean(spec, {1.0});
  const double without = DpsgdProjectedMean(spec, {0.0});
  CHECK(with - without == doctest::Approx(0.7).epsilon(1e-12));
  // The base statistic is deterministic given the data seed.
  CHECK(DpsgdProjectedMean(spec, {0.0}) == without);
}

TEST_CASE("output sample keys separate kinds and contents") {
  OutputSample bits;
  bits.kind = OutputKind::kBits;
  bits.vec = {1, 0, 1};
  OutputSample symbols;
  symbols.kind = OutputKind::kSymbols;
  symbols.vec = {1, 0, 1};
  CHECK(bits.Key() != symbols.Key());
  CHECK_FALSE(bits == symbols);
  OutputSample scalar;
  scalar.value = 0.25;
  OutputSample scalar2;
  scalar2.value = 0.25;
  CHECK(scalar.Key() == scalar2.Key());
  CHECK(scalar == scalar2);
}

}  // namespace
}  // namespace dpaudit
