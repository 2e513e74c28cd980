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

#ifndef DPAUDIT_ORACLE_H_
#define DPAUDIT_ORACLE_H_

#include <vector>

#include "dpaudit/mechanisms.h"

namespace dpaudit {

// Analytical density and mass oracles. These are a separate capability from
// the Sampler handle: ground-truth and region code may include this header,
// auditor code must not (enforced by a source-inspection test).

// Exact output density for the continuous scalar families (Laplace,
// AdaptedLaplace, Gaussian, DpsgdOneStep). Throws for discrete families.
double OracleDensity(const MechanismSpec& spec, const std::vector<double>& input,
                     double output);

// Exact Pr[M(input) <= x] for the continuous scalar families.
double OracleScalarCdf(const MechanismSpec& spec,
                       const std::vector<double>& input, double x);

// Exact Pr[M(input) = out] for the discrete families (SVT variants by
// integrating out the shared threshold noise, RAPPOR in closed form).
// Throws for continuous families or structurally invalid outputs.
double OracleMass(const MechanismSpec& spec, const std::vector<double>& input,
                  const OutputSample& out);

// All structurally valid outputs of a discrete family (SVT abort sequences,
// RAPPOR bit vectors). Guarded against combinatorial blowup.
std::vector<OutputSample> EnumerateOutputs(const MechanismSpec& spec);

// f(t1, t2) = (e^{-t1 t2} - e^{-2 t1 t2}) / (t1 t2), the closed-form factor
// in the adapted-SVT output masses.
double AdaptedSvtF(double theta1, double theta2);

// Probability, under the larger input of a One Above pair, of the set of
// adapted-SVT outputs that start with a bottom symbol. Every output in that
// set has likelihood ratio exactly e^{t2}, so the set's total mass is
// g(t1, t2) = e^{-t2} f(t1, t2) / 2, independent of the query count.
double AdaptedSvtRareMass(double theta1, double theta2);

}  // namespace dpaudit

#endif  // DPAUDIT_ORACLE_H_
