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

#ifndef DPAUDIT_QUADRATURE_H_
#define DPAUDIT_QUADRATURE_H_

#include <functional>

namespace dpaudit {

// Adaptive Gauss-Kronrod (15/7) integration of f over [a, b] to the given
// absolute tolerance. The integrand must be finite on [a, b].
double Integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-9);

// Integrates a light-tailed integrand over the whole real line. The bracket
// starts at center +/- width and doubles until the added tail contribution
// falls below abs_tol.
double IntegrateRealLine(const std::function<double(double)>& f, double center,
                         double width, double abs_tol = 1e-9);

}  // namespace dpaudit

#endif  // DPAUDIT_QUADRATURE_H_
