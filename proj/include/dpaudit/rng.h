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

#ifndef DPAUDIT_RNG_H_
#define DPAUDIT_RNG_H_

#include <cmath>
#include <cstdint>

namespace dpaudit {

// Counter-based generator (splitmix64 stream keyed by a scrambled seed).
// The output stream is a pure function of the seed, so any draw can be
// reproduced in isolation and batches can be partitioned across threads
// by assigning disjoint seeds.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(Mix(seed + kGolden)) {}

  uint64_t NextU64() {
    state_ += kGolden;
    return Mix(state_);
  }

  // Uniform on the open interval (0, 1).
  double Uniform() {
    return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double UniformRange(double lo, double hi) {
    return lo + (hi - lo) * Uniform();
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Laplace with the given scale b, density exp(-|x|/b) / (2b).
  double Laplace(double scale) {
    const double u = Uniform() - 0.5;
    const double s = u < 0 ? -1.0 : 1.0;
    return -scale * s * std::log(1.0 - 2.0 * std::fabs(u));
  }

  double Gaussian(double stddev) {
    const double u1 = Uniform();
    const double u2 = Uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * kPi * u2);
  }

  // Exponential with the given rate.
  double Exponential(double rate) { return -std::log(Uniform()) / rate; }

 private:
  static constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr double kPi = 3.14159265358979323846;

  static uint64_t Mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
};

}  // namespace dpaudit

#endif  // DPAUDIT_RNG_H_
