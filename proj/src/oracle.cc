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

#include "dpaudit/oracle.h"

#include <cmath>
#include <stdexcept>

#include "dpaudit/quadrature.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

double LaplaceDensity(double x, double scale) {
  return std::exp(-std::fabs(x) / scale) / (2.0 * scale);
}

double LaplaceCdf(double x, double scale) {
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

// P(nu >= x) for nu ~ Lap(0, scale).
double LaplaceSurvival(double x, double scale) { return 1.0 - LaplaceCdf(x, scale); }

double AdaptedLaplaceDensityAt(double v, double theta1, double theta2,
                               double delta) {
  const double s = theta1 / delta;
  const double m = theta2;
  const double mag = std::fabs(v);
  if (mag <= m) return 0.5 * s * std::exp(-s * mag);
  if (mag <= m + 1.0 / s) return 0.5 * s * std::exp(-s * m);
  return 0.0;
}

// One-sided survival P(nu >= x) for x >= 0 under the adapted density; by
// symmetry the CDF follows for all x.
double AdaptedLaplaceSurvivalPos(double x, double theta1, double theta2,
                                 double delta) {
  const double s = theta1 / delta;
  const double m = theta2;
  if (x <= m) return 0.5 * std::exp(-s * x);
  if (x <= m + 1.0 / s) return 0.5 * s * std::exp(-s * m) * (m + 1.0 / s - x);
  return 0.0;
}

double AdaptedLaplaceCdf(double x, double theta1, double theta2, double delta) {
  if (x >= 0.0) return 1.0 - AdaptedLaplaceSurvivalPos(x, theta1, theta2, delta);
  return AdaptedLaplaceSurvivalPos(-x, theta1, theta2, delta);
}

double NormalDensity(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * M_PI));
}

struct SvtNoise {
  double noise_scale;  // per-query Laplace scale
};

SvtNoise SvtNoiseFor(const MechanismSpec& spec) {
  if (spec.family == Family::kSvt) {
    const double half = spec.params[0] / 2.0;
    return {2.0 * spec.svt.abort_count * spec.sensitivity / half};
  }
  return {spec.svt.abort_count * spec.sensitivity / spec.params[1]};
}

void CheckSvtOutputShape(const MechanismSpec& spec, const OutputSample& out) {
  if (out.kind != OutputKind::kSymbols) {
    throw std::invalid_argument("svt oracle: output must be a symbol vector");
  }
  const int n = static_cast<int>(out.vec.size());
  if (n < 1 || n > spec.svt.query_count) {
    throw std::invalid_argument("svt oracle: output length out of range");
  }
  int tops = 0;
  for (int i = 0; i < n; ++i) {
    if (out.vec[i] > 1) throw std::invalid_argument("svt oracle: bad symbol");
    if (out.vec[i] == 1) {
      ++tops;
      if (tops == spec.svt.abort_count && i != n - 1) {
        throw std::invalid_argument("svt oracle: symbols after abort");
      }
    }
  }
  if (tops > spec.svt.abort_count) {
    throw std::invalid_argument("svt oracle: too many top symbols");
  }
  if (tops < spec.svt.abort_count && n != spec.svt.query_count) {
    throw std::invalid_argument("svt oracle: truncated output without abort");
  }
}

// Pr[output | rho = z]: the per-query noises are independent given the shared
// threshold perturbation.
double SvtConditionalMass(const MechanismSpec& spec,
                          const std::vector<double>& input,
                          const OutputSample& out, double z,
                          double noise_scale) {
  double prod = 1.0;
  for (size_t i = 0; i < out.vec.size(); ++i) {
    const double gap = spec.svt.thresholds[i] + z - input[i];
    const double p_top = LaplaceSurvival(gap, noise_scale);
    prod *= out.vec[i] == 1 ? p_top : 1.0 - p_top;
  }
  return prod;
}

double SvtMass(const MechanismSpec& spec, const std::vector<double>& input,
               const OutputSample& out) {
  CheckSvtOutputShape(spec, out);
  const double noise_scale = SvtNoiseFor(spec).noise_scale;
  if (spec.family == Family::kSvt) {
    const double rho_scale = spec.sensitivity / (spec.params[0] / 2.0);
    return IntegrateRealLine(
        [&](double z) {
          return LaplaceDensity(z, rho_scale) *
                 SvtConditionalMass(spec, input, out, z, noise_scale);
        },
        0.0, 4.0 * rho_scale, 1e-11);
  }
  const double t1 = spec.params[0];
  return Integrate(
             [&](double z) {
               return SvtConditionalMass(spec, input, out, z, noise_scale);
             },
             -2.0 * t1, -t1, 1e-11) /
         t1;
}

double RapporMass(const MechanismSpec& spec, const std::vector<double>& input,
                  const OutputSample& out) {
  if (out.kind != OutputKind::kBits ||
      static_cast<int>(out.vec.size()) != spec.rappor.filter_size) {
    throw std::invalid_argument("rappor oracle: output must have k bits");
  }
  std::vector<uint8_t> bloom(spec.rappor.filter_size, 0);
  for (int bit : RapporBloomBits(spec, input)) bloom[bit] = 1;
  const double theta = spec.params[0];
  double prod = 1.0;
  for (size_t i = 0; i < out.vec.size(); ++i) {
    const double p_one = theta / 2.0 + (1.0 - theta) * bloom[i];
    prod *= out.vec[i] == 1 ? p_one : 1.0 - p_one;
  }
  return prod;
}

void EnumerateSvt(const MechanismSpec& spec, std::vector<uint8_t>& prefix,
                  int tops, std::vector<OutputSample>& out) {
  const int n = static_cast<int>(prefix.size());
  if (tops == spec.svt.abort_count || n == spec.svt.query_count) {
    OutputSample s;
    s.kind = OutputKind::kSymbols;
    s.vec = prefix;
    out.push_back(std::move(s));
    return;
  }
  prefix.push_back(0);
  EnumerateSvt(spec, prefix, tops, out);
  prefix.back() = 1;
  EnumerateSvt(spec, prefix, tops + 1, out);
  prefix.pop_back();
}

}  // namespace

double OracleDensity(const MechanismSpec& spec, const std::vector<double>& input,
                     double output) {
  spec.Validate();
  switch (spec.family) {
    case Family::kLaplace:
      return LaplaceDensity(output - input[0],
                            spec.sensitivity / spec.params[0]);
    case Family::kAdaptedLaplace:
      return AdaptedLaplaceDensityAt(output - input[0], spec.params[0],
                                     spec.params[1], spec.sensitivity);
    case Family::kGaussian:
      return NormalDensity(output, input[0], spec.params[0]);
    case Family::kDpsgdOneStep:
      return NormalDensity(output, DpsgdProjectedMean(spec, input),
                           spec.params[0] * spec.dpsgd.clip_norm);
    default:
      throw std::invalid_argument("OracleDensity: discrete family");
  }
}

double OracleScalarCdf(const MechanismSpec& spec,
                       const std::vector<double>& input, double x) {
  spec.Validate();
  switch (spec.family) {
    case Family::kLaplace:
      return LaplaceCdf(x - input[0], spec.sensitivity / spec.params[0]);
    case Family::kAdaptedLaplace:
      return AdaptedLaplaceCdf(x - input[0], spec.params[0], spec.params[1],
                               spec.sensitivity);
    case Family::kGaussian:
      return NormalCdf((x - input[0]) / spec.params[0]);
    case Family::kDpsgdOneStep:
      return NormalCdf((x - DpsgdProjectedMean(spec, input)) /
                       (spec.params[0] * spec.dpsgd.clip_norm));
    default:
      throw std::invalid_argument("OracleScalarCdf: discrete family");
  }
}

double OracleMass(const MechanismSpec& spec, const std::vector<double>& input,
                  const OutputSample& out) {
  spec.Validate();
  switch (spec.family) {
    case Family::kSvt:
    case Family::kAdaptedSvt:
      if (static_cast<int>(input.size()) != spec.svt.query_count) {
        throw std::invalid_argument("svt oracle: input length mismatch");
      }
      return SvtMass(spec, input, out);
    case Family::kRapporOneTime:
      return RapporMass(spec, input, out);
    default:
      throw std::invalid_argument("OracleMass: continuous family");
  }
}

std::vector<OutputSample> EnumerateOutputs(const MechanismSpec& spec) {
  spec.Validate();
  std::vector<OutputSample> out;
  if (spec.family == Family::kSvt || spec.family == Family::kAdaptedSvt) {
    if (spec.svt.query_count > 20) {
      throw std::invalid_argument("EnumerateOutputs: query_count too large");
    }
    std::vector<uint8_t> prefix;
    EnumerateSvt(spec, prefix, 0, out);
    return out;
  }
  if (spec.family == Family::kRapporOneTime) {
    const int k = spec.rappor.filter_size;
    if (k > 20) {
      throw std::invalid_argument("EnumerateOutputs: filter too large");
    }
    out.reserve(size_t{1} << k);
    for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
      OutputSample s;
      s.kind = OutputKind::kBits;
      s.vec.resize(k);
      for (int i = 0; i < k; ++i) s.vec[i] = (mask >> i) & 1;
      out.push_back(std::move(s));
    }
    return out;
  }
  throw std::invalid_argument("EnumerateOutputs: continuous family");
}

double AdaptedSvtF(double theta1, double theta2) {
  const double prod = theta1 * theta2;
  if (prod <= 0.0) {
    throw std::invalid_argument("AdaptedSvtF: product must be positive");
  }
  return (std::exp(-prod) - std::exp(-2.0 * prod)) / prod;
}

double AdaptedSvtRareMass(double theta1, double theta2) {
  return std::exp(-theta2) * AdaptedSvtF(theta1, theta2) / 2.0;
}

}  // namespace dpaudit
