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

#include "dpaudit/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <stdexcept>
#include <thread>

#include "dpaudit/rng.h"
#include "json.hpp"

namespace dpaudit {
namespace {

using nlohmann::json;

uint64_t MixU64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

uint64_t DoubleBits(double d) {
  uint64_t u;
  std::memcpy(&u, &d, sizeof(u));
  return u;
}

void Require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Draws one noise value from the bounded two-piece adapted-Laplace density:
// exponential core on |v| <= bound, constant tail of width delta/rate_param.
// Closed-form inverse CDF, no rejection.
double AdaptedLaplaceNoise(double theta1, double theta2, double delta,
                           Rng& rng) {
  const double rate = theta1 / delta;       // core decay rate
  const double core_mass = 1.0 - std::exp(-rate * theta2);  // one-sided
  const double u = rng.Uniform();
  const double sign = rng.Bernoulli(0.5) ? 1.0 : -1.0;
  double mag;
  if (u < core_mass) {
    mag = -std::log(1.0 - u) / rate;
  } else {
    const double tail_density = rate * std::exp(-rate * theta2);
    mag = theta2 + (u - core_mass) / tail_density;
    mag = std::min(mag, theta2 + 1.0 / rate);
  }
  return sign * mag;
}

OutputSample SvtRun(const MechanismSpec& spec, const std::vector<double>& input,
                    Rng& rng) {
  const auto& cfg = spec.svt;
  double rho;
  double noise_scale;
  if (spec.family == Family::kSvt) {
    const double half = spec.params[0] / 2.0;  // theta1 = theta2 = theta / 2
    rho = rng.Laplace(spec.sensitivity / half);
    noise_scale = 2.0 * cfg.abort_count * spec.sensitivity / half;
  } else {
    const double t1 = spec.params[0];
    const double t2 = spec.params[1];
    rho = rng.UniformRange(-2.0 * t1, -t1);
    noise_scale = cfg.abort_count * spec.sensitivity / t2;
  }
  OutputSample out;
  out.kind = OutputKind::kSymbols;
  int count = 0;
  for (int i = 0; i < cfg.query_count; ++i) {
    const double nu = rng.Laplace(noise_scale);
    if (input[i] + nu >= cfg.thresholds[i] + rho) {
      out.vec.push_back(1);
      if (++count >= cfg.abort_count) break;
    } else {
      out.vec.push_back(0);
    }
  }
  return out;
}

OutputSample RapporRun(const std::vector<uint8_t>& bloom, double theta,
                       Rng& rng) {
  OutputSample out;
  out.kind = OutputKind::kBits;
  out.vec.resize(bloom.size());
  for (size_t i = 0; i < bloom.size(); ++i) {
    const double u = rng.Uniform();
    if (u < theta / 2.0) {
      out.vec[i] = 1;
    } else if (u < theta) {
      out.vec[i] = 0;
    } else {
      out.vec[i] = bloom[i];
    }
  }
  return out;
}

std::vector<uint8_t> BloomVector(const MechanismSpec& spec,
                                 const std::vector<double>& input) {
  std::vector<uint8_t> bloom(spec.rappor.filter_size, 0);
  for (int bit : RapporBloomBits(spec, input)) bloom[bit] = 1;
  return bloom;
}

}  // namespace

std::string FamilyName(Family family) {
  switch (family) {
    case Family::kLaplace:
      return "laplace";
    case Family::kAdaptedLaplace:
      return "adapted_laplace";
    case Family::kSvt:
      return "svt";
    case Family::kAdaptedSvt:
      return "adapted_svt";
    case Family::kRapporOneTime:
      return "rappor_one_time";
    case Family::kGaussian:
      return "gaussian";
    case Family::kDpsgdOneStep:
      return "dpsgd_one_step";
  }
  throw std::invalid_argument("unknown family");
}

Family FamilyFromName(const std::string& name) {
  for (Family f :
       {Family::kLaplace, Family::kAdaptedLaplace, Family::kSvt,
        Family::kAdaptedSvt, Family::kRapporOneTime, Family::kGaussian,
        Family::kDpsgdOneStep}) {
    if (FamilyName(f) == name) return f;
  }
  throw std::invalid_argument("unknown family name: " + name);
}

void MechanismSpec::Validate() const {
  Require(sensitivity > 0.0, "sensitivity must be positive");
  switch (family) {
    case Family::kLaplace:
    case Family::kGaussian:
    case Family::kDpsgdOneStep:
      Require(params.size() == 1 && params[0] > 0.0,
              FamilyName(family) + ": params must be (theta), theta > 0");
      break;
    case Family::kAdaptedLaplace:
      Require(params.size() == 2 && params[0] > 0.0 && params[1] >= 0.0,
              "adapted_laplace: params must be (theta1 > 0, theta2 >= 0)");
      break;
    case Family::kSvt:
      Require(params.size() == 1 && params[0] > 0.0,
              "svt: params must be (theta), theta > 0");
      break;
    case Family::kAdaptedSvt:
      Require(params.size() == 2 && params[0] > 0.0 && params[1] > 0.0,
              "adapted_svt: params must be (theta1, theta2), both > 0");
      break;
    case Family::kRapporOneTime:
      Require(params.size() == 1 && params[0] > 0.0 && params[0] <= 1.0,
              "rappor: params must be (theta), 0 < theta <= 1");
      Require(rappor.hash_count >= 1, "rappor: hash_count must be >= 1");
      Require(rappor.filter_size >= 2 * rappor.hash_count,
              "rappor: filter_size must be >= 2 * hash_count");
      break;
  }
  if (family == Family::kSvt || family == Family::kAdaptedSvt) {
    Require(svt.query_count >= 1, "svt: query_count must be >= 1");
    Require(svt.abort_count >= 1, "svt: abort_count must be >= 1");
    Require(static_cast<int>(svt.thresholds.size()) == svt.query_count,
            "svt: need one threshold per query");
  }
  if (family == Family::kDpsgdOneStep) {
    Require(dpsgd.clip_norm > 0.0 && dpsgd.dimension >= 1 &&
                dpsgd.batch_size >= 1,
            "dpsgd: invalid structural config");
  }
}

std::string MechanismSpec::ToJson() const {
  json j;
  j["family"] = FamilyName(family);
  j["params"] = params;
  j["sensitivity"] = sensitivity;
  if (family == Family::kSvt || family == Family::kAdaptedSvt) {
    j["svt"] = {{"thresholds", svt.thresholds},
                {"query_count", svt.query_count},
                {"abort_count", svt.abort_count}};
  }
  if (family == Family::kRapporOneTime) {
    j["rappor"] = {{"filter_size", rappor.filter_size},
                   {"hash_count", rappor.hash_count},
                   {"hash_seed", rappor.hash_seed}};
  }
  if (family == Family::kDpsgdOneStep) {
    j["dpsgd"] = {{"clip_norm", dpsgd.clip_norm},
                  {"dimension", dpsgd.dimension},
                  {"batch_size", dpsgd.batch_size},
                  {"data_seed", dpsgd.data_seed}};
  }
  return j.dump();
}

MechanismSpec MechanismSpec::FromJson(const std::string& text) {
  json j = json::parse(text);
  MechanismSpec spec;
  spec.family = FamilyFromName(j.at("family").get<std::string>());
  spec.params = j.at("params").get<std::vector<double>>();
  spec.sensitivity = j.value("sensitivity", 1.0);
  if (j.contains("svt")) {
    spec.svt.thresholds = j["svt"].at("thresholds").get<std::vector<double>>();
    spec.svt.query_count = j["svt"].value("query_count", 1);
    spec.svt.abort_count = j["svt"].value("abort_count", 1);
  }
  if (j.contains("rappor")) {
    spec.rappor.filter_size = j["rappor"].value("filter_size", 16);
    spec.rappor.hash_count = j["rappor"].value("hash_count", 2);
    spec.rappor.hash_seed = j["rappor"].value("hash_seed", uint64_t{1});
  }
  if (j.contains("dpsgd")) {
    spec.dpsgd.clip_norm = j["dpsgd"].value("clip_norm", 1.0);
    spec.dpsgd.dimension = j["dpsgd"].value("dimension", 10);
    spec.dpsgd.batch_size = j["dpsgd"].value("batch_size", 64);
    spec.dpsgd.data_seed = j["dpsgd"].value("data_seed", uint64_t{7});
  }
  spec.Validate();
  return spec;
}

uint64_t MechanismSpec::Hash() const {
  const std::string text = ToJson();
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : text) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string PatternName(InputPattern pattern) {
  switch (pattern) {
    case InputPattern::kOneAbove:
      return "One Above";
    case InputPattern::kOneBelow:
      return "One Below";
    case InputPattern::kOneBelowRestAbove:
      return "One Below Rest Above";
    case InputPattern::kHalfHalf:
      return "Half Half";
    case InputPattern::kAllAboveAllBelow:
      return "All Above & All Below";
    case InputPattern::kXShape:
      return "X shape";
  }
  throw std::invalid_argument("unknown pattern");
}

InputPattern PatternFromName(const std::string& name) {
  for (InputPattern p :
       {InputPattern::kOneAbove, InputPattern::kOneBelow,
        InputPattern::kOneBelowRestAbove, InputPattern::kHalfHalf,
        InputPattern::kAllAboveAllBelow, InputPattern::kXShape}) {
    if (PatternName(p) == name) return p;
  }
  throw std::invalid_argument("unknown input pattern: " + name);
}

AdjacentPair GenerateInputs(InputPattern pattern, int dimension, double delta) {
  Require(dimension >= 1, "dimension must be >= 1");
  Require(delta > 0.0, "delta must be positive");
  AdjacentPair pair;
  pair.pattern = pattern;
  pair.q_a.assign(dimension, 1.0);
  pair.q_a_prime.assign(dimension, 1.0);
  switch (pattern) {
    case InputPattern::kOneAbove:
      pair.q_a_prime[0] = 1.0 + delta;
      break;
    case InputPattern::kOneBelow:
      pair.q_a_prime[0] = 1.0 - delta;
      break;
    case InputPattern::kOneBelowRestAbove:
      pair.q_a_prime[0] = 1.0 - delta;
      for (int i = 1; i < dimension; ++i) pair.q_a_prime[i] = 1.0 + delta;
      break;
    case InputPattern::kHalfHalf: {
      const int below = (dimension + 1) / 2;
      for (int i = 0; i < dimension; ++i) {
        pair.q_a_prime[i] = (i < below) ? 1.0 - delta : 1.0 + delta;
      }
      break;
    }
    case InputPattern::kAllAboveAllBelow:
      for (int i = 0; i < dimension; ++i) pair.q_a_prime[i] = 1.0 + delta;
      break;
    case InputPattern::kXShape: {
      const int ones = dimension / 2;
      for (int i = 0; i < dimension; ++i) {
        pair.q_a[i] = (i < ones) ? delta : 0.0;
        pair.q_a_prime[i] = (i < ones) ? 0.0 : delta;
      }
      break;
    }
  }
  return pair;
}

bool OutputSample::operator==(const OutputSample& other) const {
  if (kind != other.kind) return false;
  if (kind == OutputKind::kScalar) return value == other.value;
  return vec == other.vec;
}

std::string OutputSample::Key() const {
  if (kind == OutputKind::kScalar) {
    char buf[sizeof(double)];
    std::memcpy(buf, &value, sizeof(double));
    return std::string(buf, sizeof(double));
  }
  std::string key;
  key.reserve(vec.size() + 1);
  key.push_back(kind == OutputKind::kBits ? 'b' : 's');
  for (uint8_t v : vec) key.push_back(static_cast<char>('0' + v));
  return key;
}

std::vector<int> RapporBloomBits(const MechanismSpec& spec,
                                 const std::vector<double>& input) {
  std::vector<int> bits;
  bits.reserve(spec.rappor.hash_count);
  for (int j = 0; j < spec.rappor.hash_count; ++j) {
    uint64_t h = MixU64(spec.rappor.hash_seed ^ MixU64(j + 1));
    for (double d : input) h = MixU64(h ^ DoubleBits(d));
    bits.push_back(static_cast<int>(h % spec.rappor.filter_size));
  }
  return bits;
}

void EnsureRapporPairHashes(MechanismSpec& spec, const AdjacentPair& pair) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const auto bits_a = RapporBloomBits(spec, pair.q_a);
    const auto bits_b = RapporBloomBits(spec, pair.q_a_prime);
    std::set<int> all(bits_a.begin(), bits_a.end());
    all.insert(bits_b.begin(), bits_b.end());
    if (static_cast<int>(all.size()) == 2 * spec.rappor.hash_count) return;
    ++spec.rappor.hash_seed;
  }
  throw std::runtime_error(
      "rappor: could not find a hash seed giving 2h distinct differing bits");
}

double DpsgdProjectedMean(const MechanismSpec& spec,
                          const std::vector<double>& input) {
  const auto& cfg = spec.dpsgd;
  Rng rng(cfg.data_seed);
  const int d = cfg.dimension;
  // Synthetic two-class linear task: gaussian features, +/-1 labels,
  // logistic-loss gradients at w = 0.
  std::vector<double> grad_sum(d, 0.0);
  for (int i = 0; i < cfg.batch_size; ++i) {
    std::vector<double> g(d);
    const double label = rng.Bernoulli(0.5) ? 1.0 : -1.0;
    double norm_sq = 0.0;
    for (int k = 0; k < d; ++k) {
      const double x = rng.Gaussian(1.0);
      g[k] = -0.5 * label * x;
      norm_sq += g[k] * g[k];
    }
    const double norm = std::sqrt(norm_sq);
    const double scale = norm > cfg.clip_norm ? cfg.clip_norm / norm : 1.0;
    for (int k = 0; k < d; ++k) grad_sum[k] += scale * g[k];
  }
  // Canary gradient direction: a fixed random unit vector. The canary's
  // clipped gradient is clip_norm * u, the worst case for the audit pair.
  std::vector<double> u(d);
  double u_norm_sq = 0.0;
  for (int k = 0; k < d; ++k) {
    u[k] = rng.Gaussian(1.0);
    u_norm_sq += u[k] * u[k];
  }
  const double u_norm = std::sqrt(u_norm_sq);
  double mean = 0.0;
  for (int k = 0; k < d; ++k) mean += grad_sum[k] * u[k] / u_norm;
  if (!input.empty() && input[0] >= 0.5) mean += cfg.clip_norm;
  return mean;
}

OutputSample Sample(const MechanismSpec& spec, const std::vector<double>& input,
                    uint64_t seed) {
  spec.Validate();
  Rng rng(seed);
  OutputSample out;
  switch (spec.family) {
    case Family::kLaplace:
      Require(!input.empty(), "laplace: input must be non-empty");
      out.value = input[0] + rng.Laplace(spec.sensitivity / spec.params[0]);
      return out;
    case Family::kAdaptedLaplace:
      Require(!input.empty(), "adapted_laplace: input must be non-empty");
      out.value = input[0] + AdaptedLaplaceNoise(spec.params[0], spec.params[1],
                                                spec.sensitivity, rng);
      return out;
    case Family::kSvt:
    case Family::kAdaptedSvt:
      Require(static_cast<int>(input.size()) == spec.svt.query_count,
              "svt: input length must match query_count");
      return SvtRun(spec, input, rng);
    case Family::kRapporOneTime:
      return RapporRun(BloomVector(spec, input), spec.params[0], rng);
    case Family::kGaussian:
      Require(!input.empty(), "gaussian: input must be non-empty");
      out.value = input[0] + rng.Gaussian(spec.params[0]);
      return out;
    case Family::kDpsgdOneStep: {
      const double mean = DpsgdProjectedMean(spec, input);
      out.value = mean + rng.Gaussian(spec.params[0] * spec.dpsgd.clip_norm);
      return out;
    }
  }
  throw std::invalid_argument("unknown family");
}

Sampler MakeSampler(const MechanismSpec& spec, std::vector<double> input) {
  spec.Validate();
  switch (spec.family) {
    case Family::kRapporOneTime: {
      auto bloom = BloomVector(spec, input);
      const double theta = spec.params[0];
      return Sampler([bloom = std::move(bloom), theta](uint64_t seed) {
        Rng rng(seed);
        return RapporRun(bloom, theta, rng);
      });
    }
    case Family::kDpsgdOneStep: {
      const double mean = DpsgdProjectedMean(spec, input);
      const double stddev = spec.params[0] * spec.dpsgd.clip_norm;
      return Sampler([mean, stddev](uint64_t seed) {
        Rng rng(seed);
        OutputSample out;
        out.value = mean + rng.Gaussian(stddev);
        return out;
      });
    }
    default:
      return Sampler([spec, input = std::move(input)](uint64_t seed) {
        Rng rng(seed);
        switch (spec.family) {
          case Family::kLaplace: {
            OutputSample out;
            out.value =
                input[0] + rng.Laplace(spec.sensitivity / spec.params[0]);
            return out;
          }
          case Family::kAdaptedLaplace: {
            OutputSample out;
            out.value = input[0] + AdaptedLaplaceNoise(spec.params[0],
                                                       spec.params[1],
                                                       spec.sensitivity, rng);
            return out;
          }
          case Family::kGaussian: {
            OutputSample out;
            out.value = input[0] + rng.Gaussian(spec.params[0]);
            return out;
          }
          default:
            return SvtRun(spec, input, rng);
        }
      });
  }
}

PairSampler MakePairSampler(const MechanismSpec& spec,
                            const AdjacentPair& pair) {
  return {MakeSampler(spec, pair.q_a), MakeSampler(spec, pair.q_a_prime)};
}

std::vector<OutputSample> DrawBatch(const Sampler& sampler, uint64_t seed0,
                                    size_t n) {
  std::vector<OutputSample> out(n);
  const size_t workers =
      std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), 16);
  if (n < 4096 || workers == 1) {
    for (size_t i = 0; i < n; ++i) out[i] = sampler(seed0 + i);
    return out;
  }
  std::vector<std::thread> threads;
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t w = 0; w < workers; ++w) {
    const size_t lo = w * chunk;
    const size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      for (size_t i = lo; i < hi; ++i) out[i] = sampler(seed0 + i);
    });
  }
  for (auto& t : threads) t.join();
  return out;
}

}  // namespace dpaudit
