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

#ifndef DPAUDIT_WITNESS_H_
#define DPAUDIT_WITNESS_H_

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dpaudit/mechanisms.h"

namespace dpaudit {

// An outcome set. Auditors encode it as a likelihood-ratio-score threshold t
// with tie-inclusion probability q; analytic witnesses use a scalar interval
// or an explicit element list. Membership probability of any output is in
// {0, q, 1}.
struct WitnessSet {
  double ratio_threshold = 0.0;  // t, in the producing model's score units
  double tie_probability = 0.0;  // q
  bool include_above = true;     // which side of t is included

  // Scalar interval form: {b : interval_lo <= b <= interval_hi}.
  bool use_interval = false;
  double interval_lo = -HUGE_VAL;
  double interval_hi = HUGE_VAL;

  // Explicit element form, with one optional tie element included with
  // probability tie_probability.
  bool use_elements = false;
  std::vector<OutputSample> elements;
  bool has_tie_element = false;
  OutputSample tie_element;

  // Optional in-process membership function (inclusion probability) used
  // when the set is defined through a fitted model rather than a closed
  // form. Not serialized.
  std::function<double(const OutputSample&)> membership;

  // Inclusion probability of one output under whichever form is set.
  double Membership(const OutputSample& out) const;
};

// Audit result: the attained power with its confidence interval and the
// witness that produced it.
struct PowerEstimate {
  double xi_star = 0.0;
  double ci_low = -HUGE_VAL;
  double ci_high = HUGE_VAL;
  double confidence = 0.0;  // level of the interval (1 - significance)
  WitnessSet witness;
  size_t sample_count = 0;

  // Type I / type II errors of the selected threshold test, when the
  // auditor works in the (alpha, beta) plane.
  double alpha = std::nan("");
  double beta = std::nan("");
};

}  // namespace dpaudit

#endif  // DPAUDIT_WITNESS_H_
