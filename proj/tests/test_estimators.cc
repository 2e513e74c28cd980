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
#include <stdexcept>
#include <vector>

#include "dpaudit/estimators.h"
#include "dpaudit/rng.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

std::vector<OutputSample> ScalarBatch(double shift, double scale, size_t n,
                                      uint64_t seed) {
  Rng rng(seed);
  std::vector<OutputSample> out(n);
  for (auto& s : out) s.value = shift + rng.Gaussian(scale);
  return out;
}

std::vector<OutputSample> SymbolBatch(double p_top, size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<OutputSample> out(n);
  for (auto& s : out) {
    s.kind = OutputKind::kSymbols;
    s.vec = {rng.Bernoulli(p_top) ? uint8_t{1} : uint8_t{0}};
  }
  return out;
}

// Exact binomial upper tail Pr[X >= s] for small n, the defining quantity of
// the one-sided bounds.
double BinomialUpperTail(int s, int n, double p) {
  double total = 0.0;
  for (int k = s; k <= n; ++k) {
    double term = 1.0;
    for (int i = 0; i < k; ++i) term *= (n - i) / static_cast<double>(i + 1);
    term *= std::pow(p, k) * std::pow(1.0 - p, n - k);
    total += term;
  }
  return total;
}

TEST_CASE("normal cdf and quantile invert each other") {
  CHECK(NormalCdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(NormalCdf(1.959964) == doctest::Approx(0.975).epsilon(1e-6));
  for (double x : {-2.3, -0.4, 0.0, 1.1, 3.0}) {
    CHECK(NormalQuantile(NormalCdf(x)) == doctest::Approx(x).epsilon(1e-7));
  }
  CHECK_THROWS_AS(NormalQuantile(0.0), std::invalid_argument);
}

TEST_CASE("beta quantile closed forms") {
  for (double p : {0.05, 0.5, 0.9}) {
    CHECK(BetaQuantile(1.0, 1.0, p) == doctest::Approx(p).epsilon(1e-9));
    CHECK(BetaQuantile(2.0, 1.0, p) ==
          doctest::Approx(std::sqrt(p)).epsilon(1e-9));
    CHECK(BetaQuantile(1.0, 2.0, p) ==
          doctest::Approx(1.0 - std::sqrt(1.0 - p)).epsilon(1e-7));
  }
}

TEST_CASE("binomial bounds satisfy their defining tail equations") {
  const int n = 40;
  const double conf = 0.95;
  for (int s : {1, 7, 20, 39}) {
    const double lo = BinomialLowerBound(s, n, conf);
    const double hi = BinomialUpperBound(s, n, conf);
    CHECK(lo < static_cast<double>(s) / n);
    CHECK(hi > static_cast<double>(s) / n);
    // At the lower bound, seeing >= s successes has probability 1 - conf.
    CHECK(BinomialUpperTail(s, n, lo) ==
          doctest::Approx(1.0 - conf).epsilon(1e-6));
    // At the upper bound, seeing <= s successes has probability 1 - conf.
    CHECK(1.0 - BinomialUpperTail(s + 1, n, hi) ==
          doctest::Approx(1.0 - conf).epsilon(1e-6));
  }
  CHECK(BinomialLowerBound(0, n, conf) == 0.0);
  CHECK(BinomialUpperBound(n, n, conf) == 1.0);
  CHECK(BinomialLowerBound(n, n, conf) ==
        doctest::Approx(std::pow(0.05, 1.0 / n)).epsilon(1e-9));
  CHECK(BinomialUpperBound(0, n, conf) ==
        doctest::Approx(1.0 - std::pow(0.05, 1.0 / n)).epsilon(1e-9));
}

TEST_CASE("truncation floors") {
  CHECK(TruncateProbability(0.3, 0.05) == 0.3);
  CHECK(TruncateProbability(0.001, 0.05) == 0.05);
  CHECK(TruncateProbability(0.0, 0.05) == 0.05);
  CHECK(TruncateDensity(2.5, 1e-4) == 2.5);
  CHECK(TruncateDensity(0.0, 1e-4) == 1e-4);
  CHECK_THROWS_AS(TruncateProbability(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TruncateDensity(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("ratio model separates shifted scalar batches") {
  const auto a = ScalarBatch(0.0, 1.0, 20000, 1);
  const auto b = ScalarBatch(1.0, 1.0, 20000, 2);
  const RatioModel model = FitRatioModel(a, b);
  CHECK_FALSE(model.discrete());
  CHECK_FALSE(model.degenerate());
  // On fresh draws, samples from the first batch's distribution outrank
  // samples from the second in the majority of pairings.
  const auto fresh_a = ScalarBatch(0.0, 1.0, 10000, 3);
  const auto fresh_b = ScalarBatch(1.0, 1.0, 10000, 4);
  double wins = 0.0;
  for (size_t i = 0; i < fresh_a.size(); ++i) {
    const double sa = model.Score(fresh_a[i]);
    const double sb = model.Score(fresh_b[i]);
    wins += sa > sb ? 1.0 : (sa == sb ? 0.5 : 0.0);
  }
  CHECK(wins / fresh_a.size() > 0.7);
}

TEST_CASE("ratio model on identical distributions carries no signal") {
  const auto a = ScalarBatch(0.0, 1.0, 20000, 10);
  const auto b = ScalarBatch(0.0, 1.0, 20000, 11);
  const RatioModel model = FitRatioModel(a, b);
  const auto fresh_a = ScalarBatch(0.0, 1.0, 10000, 12);
  const auto fresh_b = ScalarBatch(0.0, 1.0, 10000, 13);
  double wins = 0.0;
  for (size_t i = 0; i < fresh_a.size(); ++i) {
    const double sa = model.Score(fresh_a[i]);
    const double sb = model.Score(fresh_b[i]);
    wins += sa > sb ? 1.0 : (sa == sb ? 0.5 : 0.0);
  }
  // Win rate is a binomial mean; 4 sigma around 1/2 at this sample size.
  CHECK(std::fabs(wins / fresh_a.size() - 0.5) <= 4.0 * 0.005);
}

TEST_CASE("ratio model flags degenerate training data") {
  std::vector<OutputSample> constant(500);
  for (auto& s : constant) s.value = 1.0;
  const RatioModel model = FitRatioModel(constant, constant);
  CHECK(model.degenerate());
  OutputSample lo;
  lo.value = -5.0;
  OutputSample hi;
  hi.value = 5.0;
  CHECK(model.Score(lo) == model.Score(hi));
  CHECK_THROWS_AS(FitRatioModel({}, {}), std::invalid_argument);
}

TEST_CASE("ratio model ranks discrete classes by frequency ratio") {
  const auto a = SymbolBatch(0.8, 20000, 21);
  const auto b = SymbolBatch(0.2, 20000, 22);
  const RatioModel model = FitRatioModel(a, b);
  CHECK(model.discrete());
  OutputSample top;
  top.kind = OutputKind::kSymbols;
  top.vec = {1};
  OutputSample bottom;
  bottom.kind = OutputKind::kSymbols;
  bottom.vec = {0};
  CHECK(model.Score(top) > model.Score(bottom));
}

TEST_CASE("kernel density estimate recovers a gaussian") {
  Rng rng(5);
  std::vector<double> samples(20000);
  for (auto& v : samples) v = rng.Gaussian(1.0);
  const DensityModel kde = KdeFit(samples);
  CHECK(kde.Evaluate(0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * 3.14159265358979))
            .epsilon(0.05));
  CHECK(kde.Evaluate(1.0) > kde.Evaluate(2.5));
  // Total mass integrates to one over the fitted grid.
  const int steps = 2000;
  const double lo = kde.grid_lo();
  const double hi = kde.grid_hi();
  double integral = 0.0;
  for (int i = 0; i < steps; ++i) {
    integral += kde.Evaluate(lo + (hi - lo) * (i + 0.5) / steps);
  }
  integral *= (hi - lo) / steps;
  CHECK(integral == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("kernel density estimate rejects unusable input") {
  std::vector<double> few(50, 0.5);
  CHECK_THROWS_AS(KdeFit(few), std::invalid_argument);
  std::vector<double> flat(500, 0.5);
  CHECK_THROWS_AS(KdeFit(flat), std::invalid_argument);
}

TEST_CASE("kde bootstrap resampling stays near the fit") {
  Rng rng(6);
  std::vector<double> samples(5000);
  for (auto& v : samples) v = rng.Gaussian(1.0);
  const DensityModel kde = KdeFit(samples);
  Rng boot(7);
  const DensityModel redrawn = kde.Resampled(boot);
  CHECK(redrawn.bandwidth() == kde.bandwidth());
  CHECK(redrawn.Evaluate(0.0) == doctest::Approx(kde.Evaluate(0.0)).epsilon(0.2));
}

TEST_CASE("bayesian interval brackets the two-branch power") {
  const Interval balanced = BayesianInterval(500, 500, 1000, 0.05, 0.0);
  CHECK_FALSE(balanced.empty);
  CHECK(balanced.lo <= 0.0);
  CHECK(balanced.hi >= 0.0);
  const Interval separated = BayesianInterval(700, 300, 1000, 0.05, 0.0);
  CHECK(separated.lo > 0.0);
  CHECK(separated.lo < std::log(0.7 / 0.3));
  CHECK(separated.hi > std::log(0.7 / 0.3));
  // Growing delta_c shrinks the numerators on both branches.
  const Interval shifted = BayesianInterval(700, 300, 1000, 0.05, 0.1);
  CHECK(shifted.hi < separated.hi);
  CHECK_THROWS_AS(BayesianInterval(1, 1, 10, 0.0, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace dpaudit
