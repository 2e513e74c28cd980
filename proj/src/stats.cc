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

#include "dpaudit/stats.h"

#include <stdexcept>

#include "boost/math/distributions/beta.hpp"
#include "boost/math/distributions/normal.hpp"

namespace dpaudit {

double NormalCdf(double x) {
  static const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
  return boost::math::cdf(kStdNormal, x);
}

double NormalQuantile(double p) {
  if (p <= 0.0 || p >= 1.0) {
    throw std::invalid_argument("NormalQuantile: p must be in (0, 1)");
  }
  static const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
  return boost::math::quantile(kStdNormal, p);
}

double BetaQuantile(double a, double b, double p) {
  if (a <= 0.0 || b <= 0.0) {
    throw std::invalid_argument("BetaQuantile: shape parameters must be > 0");
  }
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  boost::math::beta_distribution<double> dist(a, b);
  return boost::math::quantile(dist, p);
}

}  // namespace dpaudit
