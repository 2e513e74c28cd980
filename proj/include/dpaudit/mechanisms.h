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

#ifndef DPAUDIT_MECHANISMS_H_
#define DPAUDIT_MECHANISMS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dpaudit {

enum class Family {
  kLaplace,
  kAdaptedLaplace,
  kSvt,
  kAdaptedSvt,
  kRapporOneTime,
  kGaussian,
  kDpsgdOneStep,
};

std::string FamilyName(Family family);
Family FamilyFromName(const std::string& name);

struct SvtConfig {
  std::vector<double> thresholds;  // one per query
  int query_count = 1;
  int abort_count = 1;  // t-bar
};

struct RapporConfig {
  int filter_size = 16;  // k
  int hash_count = 2;    // h
  uint64_t hash_seed = 1;
};

struct DpsgdConfig {
  double clip_norm = 1.0;
  int dimension = 10;
  int batch_size = 64;
  uint64_t data_seed = 7;
};

// A DP mechanism family plus its parameter vector. Auditors never see this
// type: they receive only a Sampler handle (see MakeSampler).
struct MechanismSpec {
  Family family = Family::kLaplace;
  std::vector<double> params;
  double sensitivity = 1.0;
  SvtConfig svt;
  RapporConfig rappor;
  DpsgdConfig dpsgd;

  // Throws std::invalid_argument on any violated family invariant.
  void Validate() const;

  std::string ToJson() const;
  static MechanismSpec FromJson(const std::string& text);

  // Stable content hash over the serialized form.
  uint64_t Hash() const;
};

enum class InputPattern {
  kOneAbove,
  kOneBelow,
  kOneBelowRestAbove,
  kHalfHalf,
  kAllAboveAllBelow,
  kXShape,
};

std::string PatternName(InputPattern pattern);
InputPattern PatternFromName(const std::string& name);

struct AdjacentPair {
  std::vector<double> q_a;
  std::vector<double> q_a_prime;
  InputPattern pattern = InputPattern::kOneAbove;
};

// Builds the query-vector pair for one input pattern, scaled so the
// per-coordinate difference is at most delta.
AdjacentPair GenerateInputs(InputPattern pattern, int dimension, double delta);

enum class OutputKind { kScalar, kBits, kSymbols };

// One mechanism output: a real scalar, a length-k bit vector, or a vector of
// top/bottom symbols (1 = top, 0 = bottom).
struct OutputSample {
  OutputKind kind = OutputKind::kScalar;
  double value = 0.0;
  std::vector<uint8_t> vec;

  bool operator==(const OutputSample& other) const;
  // Stable key for grouping discrete outputs.
  std::string Key() const;
};

// Blackbox sampling handle. This is the only capability auditors receive;
// the analytical oracle lives in a separate header with its own type.
class Sampler {
 public:
  using Fn = std::function<OutputSample(uint64_t seed)>;
  Sampler() = default;
  explicit Sampler(Fn fn) : fn_(std::move(fn)) {}
  OutputSample operator()(uint64_t seed) const { return fn_(seed); }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  Fn fn_;
};

// One seeded draw from the mechanism on the given input.
OutputSample Sample(const MechanismSpec& spec, const std::vector<double>& input,
                    uint64_t seed);

// Binds (spec, input) into a blackbox handle. Family-derived state (bloom
// bits, gradient projections) is computed once at bind time.
Sampler MakeSampler(const MechanismSpec& spec, std::vector<double> input);

std::vector<OutputSample> DrawBatch(const Sampler& sampler, uint64_t seed0,
                                    size_t n);

// The two blackbox handles an auditor works with.
struct PairSampler {
  Sampler a;
  Sampler a_prime;
};

PairSampler MakePairSampler(const MechanismSpec& spec,
                            const AdjacentPair& pair);

// Bloom-filter bit positions for one RAPPOR input (hash_count distinct
// buckets under the spec's hash seed).
std::vector<int> RapporBloomBits(const MechanismSpec& spec,
                                 const std::vector<double>& input);

// Advances the RAPPOR hash seed until the pair maps to 2h distinct differing
// bits (h distinct per input, disjoint across inputs). Throws if no seed in a
// bounded search works.
void EnsureRapporPairHashes(MechanismSpec& spec, const AdjacentPair& pair);

// Deterministic mean of the DPSGD one-step projected statistic for the given
// canary indicator input. Exposed for the oracle and ground truth.
double DpsgdProjectedMean(const MechanismSpec& spec,
                          const std::vector<double>& input);

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_H_
