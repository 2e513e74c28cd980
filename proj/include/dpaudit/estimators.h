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

#ifndef DPAUDIT_ESTIMATORS_H_
#define DPAUDIT_ESTIMATORS_H_

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpaudit/mechanisms.h"
#include "dpaudit/rng.h"

namespace dpaudit {

// Likelihood-ratio discriminator between two sample batches. The score is
// monotone in the estimated ratio r(b) = p(b|a) / p(b|a'); for scalar outputs
// it is a logistic model on features [b, |b|, 1], for discrete outputs a
// smoothed per-class posterior.
class RatioModel {
 public:
  double Score(const OutputSample& out) const;
  bool discrete() const { return discrete_; }
  // True when the training batches carried no usable signal (all samples
  // identical); the model then scores everything equally.
  bool degenerate() const { return degenerate_; }
  std::string Serialize() const;

 private:
  friend RatioModel FitRatioModel(const std::vector<OutputSample>&,
                                  const std::vector<OutputSample>&);
  bool discrete_ = false;
  bool degenerate_ = false;
  std::array<double, 3> weights_ = {0.0, 0.0, 0.0};
  std::unordered_map<std::string, double> class_posterior_;
};

RatioModel FitRatioModel(const std::vector<OutputSample>& samples_a,
                         const std::vector<OutputSample>& samples_a_prime);

// Gaussian-kernel density estimate over a linear-binned grid. Bootstrap
// resampling redraws the binned counts multinomially.
class DensityModel {
 public:
  double Evaluate(double x) const;
  DensityModel Resampled(Rng& rng) const;
  double bandwidth() const { return bandwidth_; }
  double grid_lo() const { return grid_lo_; }
  double grid_hi() const { return grid_hi_; }
  std::string Serialize() const;

 private:
  friend DensityModel KdeFit(const std::vector<double>&, double);
  double grid_lo_ = 0.0;
  double grid_hi_ = 1.0;
  double bandwidth_ = 1.0;
  size_t total_ = 0;
  std::vector<double> counts_;
};

// bandwidth = 0 selects Silverman's rule. Requires >= 100 samples with
// nonzero spread.
DensityModel KdeFit(const std::vector<double>& samples, double bandwidth = 0.0);

// Floor truncations applied by the auditors before taking ratios.
double TruncateDensity(double density, double tau);
double TruncateProbability(double probability, double c);

// One-sided Clopper-Pearson lower bound on a Bernoulli parameter, and the
// matching upper bound.
double BinomialLowerBound(int successes, int trials, double confidence);
double BinomialUpperBound(int successes, int trials, double confidence);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;
};

// Two-sided interval on the two-branch power
//   max{ln((pa - delta_c) / pb), ln((1 - pb - delta_c) / (1 - pa))}
// from independent flat-prior Beta posteriors on both membership
// probabilities, each taken at significance / 4 per tail.
Interval BayesianInterval(int successes_a, int successes_a_prime, int trials,
                          double significance, double delta_c);

}  // namespace dpaudit

#endif  // DPAUDIT_ESTIMATORS_H_
