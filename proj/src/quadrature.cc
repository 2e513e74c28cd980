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

#include "dpaudit/quadrature.h"

#include <cmath>

namespace dpaudit {
namespace {

// 15-point Kronrod nodes on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss rule on the odd-indexed nodes.
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

struct RuleResult {
  double integral;
  double error;
};

RuleResult Gk15(const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kron = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double flo = f(mid - dx);
    const double fhi = (i == 7) ? flo : f(mid + dx);
    const double fsum = (i == 7) ? flo : flo + fhi;
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) {
      gauss += kGaussWeights[i / 2] * fsum;
    }
  }
  // Center node belongs to the Kronrod rule only.
  kron *= half;
  gauss *= half;
  return {kron, std::fabs(kron - gauss)};
}

double Adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, int depth) {
  const RuleResult r = Gk15(f, a, b);
  if (r.error <= tol || depth >= 48) {
    return r.integral;
  }
  const double mid = 0.5 * (a + b);
  return Adaptive(f, a, mid, 0.5 * tol, depth + 1) +
         Adaptive(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double Integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  return Adaptive(f, a, b, abs_tol, 0);
}

double IntegrateRealLine(const std::function<double(double)>& f, double center,
                         double width, double abs_tol) {
  double lo = center - width;
  double hi = center + width;
  double total = Integrate(f, lo, hi, abs_tol);
  for (int i = 0; i < 40; ++i) {
    const double span = hi - lo;
    const double left = Integrate(f, lo - span, lo, abs_tol);
    const double right = Integrate(f, hi, hi + span, abs_tol);
    lo -= span;
    hi += span;
    total += left + right;
    if (std::fabs(left) + std::fabs(right) < abs_tol) break;
  }
  return total;
}

}  // namespace dpaudit
