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

#ifndef DPAUDIT_STATS_H_
#define DPAUDIT_STATS_H_

#include <cstdint>

namespace dpaudit {

// Standard normal CDF.
double NormalCdf(double x);

// Standard normal quantile, p in (0, 1).
double NormalQuantile(double p);

// Quantile of Beta(a, b) at probability p.
double BetaQuantile(double a, double b, double p);

}  // namespace dpaudit

#endif  // DPAUDIT_STATS_H_
