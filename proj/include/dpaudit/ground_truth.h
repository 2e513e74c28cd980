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

#ifndef DPAUDIT_GROUND_TRUTH_H_
#define DPAUDIT_GROUND_TRUTH_H_

#include "dpaudit/mechanisms.h"
#include "dpaudit/witness.h"

namespace dpaudit {

// The privacy level a mechanism actually provides claim-side code is audited
// against: (epsilon_c, delta_c).
struct PrivacyClaim {
  double epsilon_c = 0.0;
  double delta_c = 0.0;
};

// Strongest achievable privacy level. value may be +infinity. Some families
// only admit a proven lower bound on it; those are flagged so verdict code
// can treat them accordingly.
struct TrueEpsilon {
  double value = 0.0;
  bool lower_bound_only = false;
};

// Strongest achievable (epsilon, delta_c)-DP level of the mechanism.
// Throws std::invalid_argument for unsupported (family, delta_c) pairs.
TrueEpsilon TrueEpsilonOf(const MechanismSpec& spec, double delta_c);

// The outcome set attaining the strongest distinguishing power for the pair,
// oracle-computed. For delta_c = 0 this is the argmax-ratio set; otherwise a
// ratio-threshold set maximizing ln((Pr[a in S] - delta_c) / Pr[a' in S]).
WitnessSet OptimalWitness(const MechanismSpec& spec, const AdjacentPair& pair,
                          double delta_c);

// Oracle probability Pr[M(input) in S] for an interval or element witness.
double WitnessProbability(const MechanismSpec& spec,
                          const std::vector<double>& input,
                          const WitnessSet& witness);

// Oracle-evaluated power ln((Pr[a in S] - delta_c) / Pr[a' in S]).
double WitnessPower(const MechanismSpec& spec, const AdjacentPair& pair,
                    const WitnessSet& witness, double delta_c);

// Hypothesis-testing tradeoff curve of the mechanism's distinguishing
// problem: beta(alpha) = minimal type II error at type I error alpha.
struct TradeoffCurve {
  Family family = Family::kLaplace;
  double theta = 1.0;
  double sensitivity = 1.0;
};

TradeoffCurve TradeoffOf(const MechanismSpec& spec);
double Tradeoff(const TradeoffCurve& curve, double alpha);

// delta as a function of epsilon (the privacy profile), and its inverse by
// bisection on epsilon in [0, 50] to absolute tolerance 1e-9.
double DeltaCurve(const MechanismSpec& spec, double epsilon);
double InverseDeltaCurve(const MechanismSpec& spec, double delta_c);

}  // namespace dpaudit

#endif  // DPAUDIT_GROUND_TRUTH_H_
