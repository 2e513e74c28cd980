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

#include "dpaudit/ground_truth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dpaudit/oracle.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool IsContinuous(Family family) {
  return family == Family::kLaplace || family == Family::kAdaptedLaplace ||
         family == Family::kGaussian || family == Family::kDpsgdOneStep;
}

double EffectiveMean(const MechanismSpec& spec,
                     const std::vector<double>& input) {
  if (spec.family == Family::kDpsgdOneStep) {
    return DpsgdProjectedMean(spec, input);
  }
  return input[0];
}

double NoiseScaleOf(const MechanismSpec& spec) {
  switch (spec.family) {
    case Family::kLaplace:
      return spec.sensitivity / spec.params[0];
    case Family::kAdaptedLaplace:
      return spec.params[1] + spec.sensitivity / spec.params[0];
    case Family::kGaussian:
      return spec.params[0];
    case Family::kDpsgdOneStep:
      return spec.params[0] * spec.dpsgd.clip_norm;
    default:
      throw std::invalid_argument("NoiseScaleOf: discrete family");
  }
}

// Probability of a one-sided interval witness oriented toward mean_a.
double SidedProbability(const MechanismSpec& spec,
                        const std::vector<double>& input, double x,
                        bool lower_side) {
  const double p = OracleScalarCdf(spec, input, x);
  return lower_side ? p : 1.0 - p;
}

WitnessSet ContinuousThresholdWitness(const MechanismSpec& spec,
                                      const AdjacentPair& pair,
                                      double delta_c) {
  const double mean_a = EffectiveMean(spec, pair.q_a);
  const double mean_b = EffectiveMean(spec, pair.q_a_prime);
  const bool lower_side = mean_a <= mean_b;
  const double scale = NoiseScaleOf(spec);
  const double lo = std::min(mean_a, mean_b) - 10.0 * scale;
  const double hi = std::max(mean_a, mean_b) + 10.0 * scale;

  auto objective = [&](double x) {
    const double pa = SidedProbability(spec, pair.q_a, x, lower_side);
    const double pb = SidedProbability(spec, pair.q_a_prime, x, lower_side);
    if (pa - delta_c <= 0.0 || pb <= 0.0) return -kInf;
    return std::log(pa - delta_c) - std::log(pb);
  };

  const int kGrid = 10000;
  double best_x = mean_a;
  double best = -kInf;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    const double v = objective(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // Golden-section refinement around the best grid cell.
  double a = best_x - (hi - lo) / kGrid;
  double b = best_x + (hi - lo) / kGrid;
  const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = objective(x1);
    }
  }
  const double x = 0.5 * (a + b);
  if (objective(x) == -kInf) {
    throw std::runtime_error(
        "OptimalWitness: threshold sweep found no feasible set");
  }
  WitnessSet w;
  w.use_interval = true;
  if (lower_side) {
    w.interval_hi = x;
  } else {
    w.interval_lo = x;
  }
  return w;
}

struct ClassTable {
  std::vector<OutputSample> outputs;
  std::vector<double> mass_a;
  std::vector<double> mass_b;
};

ClassTable EnumerateClasses(const MechanismSpec& spec,
                            const AdjacentPair& pair) {
  ClassTable t;
  t.outputs = EnumerateOutputs(spec);
  t.mass_a.reserve(t.outputs.size());
  t.mass_b.reserve(t.outputs.size());
  for (const auto& o : t.outputs) {
    t.mass_a.push_back(OracleMass(spec, pair.q_a, o));
    t.mass_b.push_back(OracleMass(spec, pair.q_a_prime, o));
  }
  return t;
}

WitnessSet DiscreteWitness(const MechanismSpec& spec, const AdjacentPair& pair,
                           double delta_c) {
  ClassTable t = EnumerateClasses(spec, pair);
  WitnessSet w;
  w.use_elements = true;
  if (delta_c == 0.0) {
    double best_ratio = -kInf;
    for (size_t i = 0; i < t.outputs.size(); ++i) {
      if (t.mass_a[i] <= 0.0) continue;
      const double r =
          t.mass_b[i] > 0.0 ? t.mass_a[i] / t.mass_b[i] : kInf;
      best_ratio = std::max(best_ratio, r);
    }
    for (size_t i = 0; i < t.outputs.size(); ++i) {
      if (t.mass_a[i] <= 0.0) continue;
      const double r =
          t.mass_b[i] > 0.0 ? t.mass_a[i] / t.mass_b[i] : kInf;
      if (r == best_ratio || r >= best_ratio * (1.0 - 1e-9)) {
        w.elements.push_back(t.outputs[i]);
      }
    }
    return w;
  }
  // Ratio-ordered prefix sets: the optimum of the thresholded objective is a
  // down-set of the likelihood-ratio order.
  std::vector<size_t> order(t.outputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    const double ri = t.mass_b[i] > 0.0 ? t.mass_a[i] / t.mass_b[i] : kInf;
    const double rj = t.mass_b[j] > 0.0 ? t.mass_a[j] / t.mass_b[j] : kInf;
    return ri > rj;
  });
  double pa = 0.0;
  double pb = 0.0;
  double best = -kInf;
  size_t best_len = 0;
  for (size_t len = 1; len <= order.size(); ++len) {
    pa += t.mass_a[order[len - 1]];
    pb += t.mass_b[order[len - 1]];
    if (pa - delta_c <= 0.0 || pb <= 0.0) continue;
    const double v = std::log(pa - delta_c) - std::log(pb);
    if (v > best) {
      best = v;
      best_len = len;
    }
  }
  if (best_len == 0) {
    throw std::runtime_error("OptimalWitness: no feasible discrete set");
  }
  for (size_t i = 0; i < best_len; ++i) {
    w.elements.push_back(t.outputs[order[i]]);
  }
  return w;
}

}  // namespace

TrueEpsilon TrueEpsilonOf(const MechanismSpec& spec, double delta_c) {
  spec.Validate();
  switch (spec.family) {
    case Family::kLaplace:
      if (delta_c == 0.0) return {spec.params[0], false};
      return {InverseDeltaCurve(spec, delta_c), false};
    case Family::kAdaptedLaplace:
      return {kInf, false};
    case Family::kSvt: {
      if (delta_c != 0.0 || spec.svt.query_count != 1 ||
          spec.svt.abort_count != 1) {
        throw std::invalid_argument(
            "TrueEpsilonOf: svt supported for one query, one abort, "
            "delta_c = 0");
      }
      // Canonical adjacent pair: query at the threshold vs one sensitivity
      // below it. The strongest set is the single top answer.
      AdjacentPair pair;
      pair.q_a = {spec.svt.thresholds[0]};
      pair.q_a_prime = {spec.svt.thresholds[0] - spec.sensitivity};
      ClassTable t = EnumerateClasses(spec, pair);
      double eps = 0.0;
      for (size_t i = 0; i < t.outputs.size(); ++i) {
        if (t.mass_a[i] <= 0.0 || t.mass_b[i] <= 0.0) return {kInf, false};
        eps = std::max(eps, std::fabs(std::log(t.mass_a[i] / t.mass_b[i])));
      }
      return {eps, false};
    }
    case Family::kAdaptedSvt:
      if (delta_c != 0.0) {
        throw std::invalid_argument(
            "TrueEpsilonOf: adapted svt needs delta_c = 0");
      }
      return {spec.params[1], true};
    case Family::kRapporOneTime: {
      if (delta_c != 0.0) {
        throw std::invalid_argument("TrueEpsilonOf: rappor needs delta_c = 0");
      }
      const double theta = spec.params[0];
      const double h = spec.rappor.hash_count;
      return {2.0 * h * (std::log(1.0 - theta / 2.0) - std::log(theta / 2.0)),
              false};
    }
    case Family::kGaussian:
    case Family::kDpsgdOneStep:
      if (delta_c <= 0.0) {
        throw std::invalid_argument(
            "TrueEpsilonOf: gaussian families need delta_c > 0");
      }
      return {InverseDeltaCurve(spec, delta_c), false};
  }
  throw std::invalid_argument("unknown family");
}

WitnessSet OptimalWitness(const MechanismSpec& spec, const AdjacentPair& pair,
                          double delta_c) {
  spec.Validate();
  if (delta_c < 0.0) throw std::invalid_argument("delta_c must be >= 0");
  if (!IsContinuous(spec.family)) {
    return DiscreteWitness(spec, pair, delta_c);
  }
  const double mean_a = EffectiveMean(spec, pair.q_a);
  const double mean_b = EffectiveMean(spec, pair.q_a_prime);
  if (delta_c == 0.0) {
    if (spec.family == Family::kLaplace) {
      WitnessSet w;
      w.use_interval = true;
      if (mean_a <= mean_b) {
        w.interval_hi = mean_a;
      } else {
        w.interval_lo = mean_a;
      }
      return w;
    }
    if (spec.family == Family::kAdaptedLaplace) {
      // Bounded noise support: everything strictly outside the other
      // input's support has infinite ratio.
      const double radius =
          spec.params[1] + spec.sensitivity / spec.params[0];
      WitnessSet w;
      w.use_interval = true;
      if (mean_a <= mean_b) {
        w.interval_hi = mean_b - radius;
      } else {
        w.interval_lo = mean_b + radius;
      }
      return w;
    }
    throw std::invalid_argument(
        "OptimalWitness: gaussian families need delta_c > 0");
  }
  return ContinuousThresholdWitness(spec, pair, delta_c);
}

double WitnessSet::Membership(const OutputSample& out) const {
  if (use_interval) {
    if (out.kind != OutputKind::kScalar) {
      throw std::invalid_argument("interval witness needs scalar outputs");
    }
    return (out.value >= interval_lo && out.value <= interval_hi) ? 1.0 : 0.0;
  }
  if (use_elements) {
    for (const auto& e : elements) {
      if (e == out) return 1.0;
    }
    if (has_tie_element && tie_element == out) return tie_probability;
    return 0.0;
  }
  if (membership) return membership(out);
  throw std::invalid_argument("witness has no evaluable form");
}

double WitnessProbability(const MechanismSpec& spec,
                          const std::vector<double>& input,
                          const WitnessSet& witness) {
  if (witness.use_interval) {
    const double hi = witness.interval_hi == kInf
                          ? 1.0
                          : OracleScalarCdf(spec, input, witness.interval_hi);
    const double lo = witness.interval_lo == -kInf
                          ? 0.0
                          : OracleScalarCdf(spec, input, witness.interval_lo);
    return hi - lo;
  }
  if (witness.use_elements) {
    double p = 0.0;
    for (const auto& e : witness.elements) p += OracleMass(spec, input, e);
    if (witness.has_tie_element) {
      p += witness.tie_probability *
           OracleMass(spec, input, witness.tie_element);
    }
    return p;
  }
  throw std::invalid_argument(
      "WitnessProbability: witness has no oracle-evaluable form");
}

double WitnessPower(const MechanismSpec& spec, const AdjacentPair& pair,
                    const WitnessSet& witness, double delta_c) {
  const double pa = WitnessProbability(spec, pair.q_a, witness);
  const double pb = WitnessProbability(spec, pair.q_a_prime, witness);
  if (pa - delta_c <= 0.0) return -kInf;
  if (pb <= 0.0) return kInf;
  return std::log(pa - delta_c) - std::log(pb);
}

TradeoffCurve TradeoffOf(const MechanismSpec& spec) {
  spec.Validate();
  switch (spec.family) {
    case Family::kLaplace:
      return {Family::kLaplace, spec.params[0], spec.sensitivity};
    case Family::kGaussian:
      return {Family::kGaussian, spec.params[0], spec.sensitivity};
    case Family::kDpsgdOneStep:
      // One noisy clipped-gradient step is a one-dimensional gaussian
      // mechanism with sensitivity equal to the clip norm.
      return {Family::kGaussian, spec.params[0] * spec.dpsgd.clip_norm,
              spec.dpsgd.clip_norm};
    default:
      throw std::invalid_argument("TradeoffOf: unsupported family");
  }
}

double Tradeoff(const TradeoffCurve& curve, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("Tradeoff: alpha must be in (0, 1)");
  }
  if (curve.family == Family::kLaplace) {
    const double theta = curve.theta;
    if (alpha < std::exp(-theta) / 2.0) return 1.0 - std::exp(theta) * alpha;
    if (alpha < 0.5) return std::exp(-theta) / (4.0 * alpha);
    return std::exp(-theta) * (1.0 - alpha);
  }
  if (curve.family == Family::kGaussian) {
    const double mu = curve.sensitivity / curve.theta;
    return NormalCdf(NormalQuantile(1.0 - alpha) - mu);
  }
  throw std::invalid_argument("Tradeoff: unsupported family");
}

double DeltaCurve(const MechanismSpec& spec, double epsilon) {
  spec.Validate();
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  switch (spec.family) {
    case Family::kLaplace: {
      const double theta = spec.params[0];
      if (epsilon >= theta) return 0.0;
      return 1.0 - std::exp((epsilon - theta) / 2.0);
    }
    case Family::kGaussian:
    case Family::kDpsgdOneStep: {
      const double theta = spec.family == Family::kGaussian
                               ? spec.params[0]
                               : spec.params[0] * spec.dpsgd.clip_norm;
      const double delta = spec.family == Family::kGaussian
                               ? spec.sensitivity
                               : spec.dpsgd.clip_norm;
      const double a = epsilon * theta / delta;
      const double b = delta / (2.0 * theta);
      return NormalCdf(-a + b) - std::exp(epsilon) * NormalCdf(-a - b);
    }
    default:
      throw std::invalid_argument("DeltaCurve: unsupported family");
  }
}

double InverseDeltaCurve(const MechanismSpec& spec, double delta_c) {
  const double d0 = DeltaCurve(spec, 0.0);
  const double d_hi = DeltaCurve(spec, 50.0);
  if (delta_c > d0 || delta_c < d_hi) {
    throw std::invalid_argument("InverseDeltaCurve: delta_c out of range");
  }
  double lo = 0.0;
  double hi = 50.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (DeltaCurve(spec, mid) > delta_c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dpaudit
