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

#include "dpaudit/fp_analyzer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "dpaudit/ground_truth.h"
#include "dpaudit/stats.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectTol = 1e-6;

double GoldenMin(const std::function<double(double)>& f, double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 200 && b - a > 1e-10 * (1.0 + std::fabs(a)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Locates the largest contiguous sub-interval of [lo, hi] where every
// condition holds: coarse grid scan, per-condition single-crossing check,
// then bisection of the conjunction at both ends.
struct IntervalScan {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  bool hi_unbounded = false;
};

IntervalScan ResolveInterval(
    const std::vector<std::function<bool(double)>>& conditions, double lo,
    double hi, bool allow_unbounded_hi) {
  const int kGrid = 4000;
  std::vector<double> xs(kGrid);
  std::vector<char> ok(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = lo + (hi - lo) * (i + 0.5) / kGrid;
  }
  // Each theorem inequality is monotone in the parameter; a condition that
  // flips more than once on the grid signals a formula error upstream.
  for (const auto& cond : conditions) {
    int flips = 0;
    bool prev = cond(xs[0]);
    for (int i = 1; i < kGrid; ++i) {
      const bool cur = cond(xs[i]);
      if (cur != prev) ++flips;
      prev = cur;
    }
    if (flips > 2) {
      throw std::logic_error("ResolveInterval: condition is not monotone");
    }
  }
  auto all = [&](double x) {
    for (const auto& cond : conditions) {
      if (!cond(x)) return false;
    }
    return true;
  };
  for (int i = 0; i < kGrid; ++i) ok[i] = all(xs[i]) ? 1 : 0;

  int best_len = 0, best_start = -1;
  int i = 0;
  while (i < kGrid) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j < kGrid && ok[j]) ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_start = i;
    }
    i = j;
  }
  IntervalScan out;
  if (best_start < 0) return out;
  out.empty = false;
  int run_end = best_start + best_len - 1;

  double a = (best_start == 0) ? lo : xs[best_start - 1];
  double b = xs[best_start];
  while (b - a > kBisectTol) {
    const double mid = 0.5 * (a + b);
    (all(mid) ? b : a) = mid;
  }
  out.lo = 0.5 * (a + b);
  if (run_end == kGrid - 1 && allow_unbounded_hi) {
    out.hi = kInf;
    out.hi_unbounded = true;
    return out;
  }
  a = xs[run_end];
  b = (run_end == kGrid - 1) ? hi : xs[run_end + 1];
  while (b - a > kBisectTol) {
    const double mid = 0.5 * (a + b);
    (all(mid) ? a : b) = mid;
  }
  out.hi = 0.5 * (a + b);
  return out;
}

// Attaches interval bookkeeping plus a midpoint draw to a one-parameter
// region.
void FinishIntervalRegion(ParamRegion& region, const IntervalScan& scan) {
  region.has_interval = true;
  if (scan.empty) {
    region.lo = 0.0;
    region.hi = 0.0;
    region.draw = [](double) { return std::optional<std::vector<double>>(); };
    return;
  }
  region.lo = scan.lo;
  region.hi = scan.hi;
  const double lo = scan.lo;
  const double hi = scan.hi;
  region.draw = [lo, hi](double margin) -> std::optional<std::vector<double>> {
    if (std::isinf(hi)) {
      return std::vector<double>{lo * (1.0 + margin) + 0.5};
    }
    if (hi <= lo) return std::nullopt;
    const double t = std::clamp(0.5, margin, 1.0 - margin);
    return std::vector<double>{lo + t * (hi - lo)};
  };
}

// Pr[the SVT run with one query emits top | input one sensitivity below the
// threshold], for the benchmark noise scales at parameter theta.
double SvtTopMassBelow(double theta) {
  return (2.0 / 3.0) * std::exp(-theta / 4.0) -
         (1.0 / 6.0) * std::exp(-theta / 2.0);
}

// Mass of the rare outcome set of the adapted SVT under the far input; the
// near input carries e^{theta2} times this mass.
double AdaptedSvtRareMassFormula(double theta1, double theta2) {
  const double x = theta1 * theta2;
  const double f = (std::exp(-x) - std::exp(-2.0 * x)) / x;
  return 0.5 * std::exp(-theta2) * f;
}

double RapporStarMassFar(double theta, int h) {
  return std::pow(0.5 * theta, 2 * h);
}

// True privacy level at delta_c with the bisection cap resolved: 0 when the
// profile sits below delta_c already at epsilon = 0, +infinity when it still
// exceeds delta_c at the cap.
double EpsStarOrInf(const MechanismSpec& spec, double delta_c) {
  if (DeltaCurve(spec, 0.0) <= delta_c) return 0.0;
  if (DeltaCurve(spec, 50.0) > delta_c) return kInf;
  return InverseDeltaCurve(spec, delta_c);
}

MechanismSpec BenchmarkSpec(Family family, const std::vector<double>& params) {
  MechanismSpec spec;
  spec.family = family;
  spec.params = params;
  spec.sensitivity = 1.0;
  if (family == Family::kSvt || family == Family::kAdaptedSvt) {
    const int n = (family == Family::kSvt) ? 1 : 6;
    spec.svt.query_count = n;
    spec.svt.abort_count = 1;
    spec.svt.thresholds.assign(n, 1.0);
  }
  if (family == Family::kDpsgdOneStep) {
    spec.sensitivity = spec.dpsgd.clip_norm;
  }
  spec.Validate();
  return spec;
}

}  // namespace

double LaplaceSniperPowerFormula(double theta, double c) {
  // Tight while the optimal tail keeps mass at least c under the far input
  // (theta <= -ln(2c)); beyond that the floor caps the far-input mass at c
  // and the near-input set grows by the calibrated tie.
  if (theta <= -std::log(2.0 * c)) return theta;
  return std::log(1.0 - std::exp(-theta) / (4.0 * c)) - std::log(c);
}

double SvtSniperPowerFormula(double theta, double c) {
  const double p = SvtTopMassBelow(theta);
  if (p >= c) return -std::log(2.0 * p);
  const double q = (c - p) / (1.0 - p);
  return std::log((0.5 * (1.0 + q)) / c);
}

double RapporSniperPowerFormula(double theta, double c, int h) {
  const double p_star_far = RapporStarMassFar(theta, h);
  const double p_star_near = std::pow(1.0 - 0.5 * theta, 2 * h);
  const double p_second_far =
      2.0 * h * (1.0 - 0.5 * theta) * std::pow(0.5 * theta, 2 * h - 1);
  const double p_second_near =
      h * theta * std::pow(1.0 - 0.5 * theta, 2 * h - 1);
  if (p_star_far >= c) {
    return std::log(p_star_near) - std::log(p_star_far);
  }
  const double q = (c - p_star_far) / p_second_far;
  return std::log(p_star_near + q * p_second_near) - std::log(c);
}

std::string VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kTruePositive:
      return "TP";
    case Verdict::kTrueNegative:
      return "TN";
    case Verdict::kFalsePositive:
      return "FP";
    case Verdict::kFalseNegative:
      return "FN";
  }
  return "TN";
}

AuditVerdict Classify(double eps_c, double eps_star, double xi_star) {
  AuditVerdict out;
  out.eps_c = eps_c;
  out.eps_star = eps_star;
  out.xi_star = xi_star;
  out.infeasible = eps_star < xi_star;
  if (xi_star <= eps_c && eps_c < eps_star) {
    out.verdict = Verdict::kFalsePositive;
  } else if (xi_star > eps_c && eps_c >= eps_star) {
    out.verdict = Verdict::kFalseNegative;
  } else if (xi_star < eps_c || eps_star < eps_c) {
    out.verdict = Verdict::kTrueNegative;
  } else {
    out.verdict = Verdict::kTruePositive;
  }
  return out;
}

bool ParamRegion::Contains(const std::vector<double>& params) const {
  for (bool b : check(params)) {
    if (!b) return false;
  }
  return true;
}

std::optional<std::vector<double>> ParamRegion::Sample(double margin) const {
  auto drawn = draw(margin);
  if (!drawn.has_value()) return std::nullopt;
  const auto truth = check(*drawn);
  for (size_t i = 0; i < truth.size(); ++i) {
    if (!truth[i]) {
      throw std::logic_error("ParamRegion::Sample: drawn parameter violates " +
                             labels[i]);
    }
  }
  return drawn;
}

ParamRegion LaplaceSniperRegion(double c, double eps_c) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument("LaplaceSniperRegion: c outside (0, 1/2)");
  }
  ParamRegion region;
  region.family = Family::kLaplace;
  region.theorem_id = "laplace_sniper";
  region.labels = {"P1", "R1", "R2"};
  region.check = [c, eps_c](const std::vector<double>& p) {
    const double theta = p.at(0);
    const double v = 4.0 * c - 4.0 * c * c * std::exp(eps_c);
    // When v <= 0 the floored audit power ln(1 - e^{-theta}/(4c)) - ln(c)
    // stays below eps_c for every theta, so the upper constraint is vacuous.
    const bool r2 = (v <= 0.0) || (theta <= -std::log(v));
    return std::vector<bool>{theta > -std::log(2.0 * c), theta > eps_c, r2};
  };
  const double lo = std::max(-std::log(2.0 * c), eps_c);
  const double v = 4.0 * c - 4.0 * c * c * std::exp(eps_c);
  IntervalScan scan;
  if (v <= 0.0) {
    scan.empty = false;
    scan.lo = lo;
    scan.hi = kInf;
    scan.hi_unbounded = true;
  } else {
    const double hi = -std::log(v);
    if (hi > lo) {
      scan.empty = false;
      scan.lo = lo;
      scan.hi = hi;
    }
  }
  FinishIntervalRegion(region, scan);
  return region;
}

ParamRegion AdaptedLaplaceSniperParams(double c, double eps_c) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument(
        "AdaptedLaplaceSniperParams: c outside (0, 1/2)");
  }
  if (eps_c <= 0.0) {
    throw std::invalid_argument("AdaptedLaplaceSniperParams: eps_c <= 0");
  }
  ParamRegion region;
  region.family = Family::kAdaptedLaplace;
  region.theorem_id = "adapted_laplace_sniper";
  region.labels = {"theta1-range", "R2"};
  region.check = [c, eps_c](const std::vector<double>& p) {
    const double t1 = p.at(0);
    const double t2 = p.at(1);
    const bool range = t1 > 0.0 && t1 < eps_c && t2 > 0.0;
    bool r2 = false;
    if (range) {
      const double rhs = (std::exp(eps_c) - std::exp(t1)) * c;
      // The flat-tail mass bound takes one of two shapes depending on
      // whether the core rate reaches 1.
      const double lhs = (t1 >= 1.0)
                             ? 0.5 * std::exp(-t1 * t2 + t1 - 1.0)
                             : 0.5 * t1 * std::exp(-t1 * t2);
      r2 = lhs <= rhs;
    }
    return std::vector<bool>{range, r2};
  };
  region.draw = [c, eps_c](double margin) -> std::optional<std::vector<double>> {
    const double t1 = eps_c / 2.0;
    const double rhs = (std::exp(eps_c) - std::exp(t1)) * c;
    double t2_min;
    if (t1 >= 1.0) {
      t2_min = (t1 - 1.0 - std::log(2.0 * rhs)) / t1;
    } else {
      t2_min = std::log(t1 / (2.0 * rhs)) / t1;
    }
    const double t2 = std::max(t2_min, 0.1) * (1.0 + std::max(margin, 0.02));
    return std::vector<double>{t1, t2};
  };
  return region;
}

ParamRegion SvtSniperRegion(double c, double eps_c) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument("SvtSniperRegion: c outside (0, 1/2)");
  }
  ParamRegion region;
  region.family = Family::kSvt;
  region.theorem_id = "svt_sniper";
  region.labels = {"P1", "R1", "R2"};
  auto p1 = [c](double theta) { return SvtTopMassBelow(theta) < c; };
  auto r1 = [eps_c](double theta) {
    return -std::log(2.0 * SvtTopMassBelow(theta)) > eps_c;
  };
  auto r2 = [c, eps_c](double theta) {
    return SvtSniperPowerFormula(theta, c) <= eps_c;
  };
  region.check = [p1, r1, r2](const std::vector<double>& p) {
    const double theta = p.at(0);
    return std::vector<bool>{p1(theta), r1(theta), r2(theta)};
  };
  const IntervalScan scan = ResolveInterval({p1, r1, r2}, 1e-4, 60.0, true);
  FinishIntervalRegion(region, scan);
  return region;
}

ParamRegion AdaptedSvtSniperParams(double c, double eps_c,
                                   double margin_above) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument("AdaptedSvtSniperParams: c outside (0, 1/2)");
  }
  ParamRegion region;
  region.family = Family::kAdaptedSvt;
  region.theorem_id = "adapted_svt_sniper";
  region.labels = {"P1", "R1", "R2"};
  region.check = [c, eps_c](const std::vector<double>& p) {
    const double t1 = p.at(0);
    const double t2 = p.at(1);
    if (t1 <= 0.0 || t2 <= 0.0) {
      return std::vector<bool>{false, false, false};
    }
    const double g = AdaptedSvtRareMassFormula(t1, t2);
    const bool p1 = g < c;
    const bool r1 = t2 > eps_c;
    const double q = (c - g) / (1.0 - g);
    const double lifted = std::exp(t2) * g;
    const bool r2 = p1 && lifted + q * (1.0 - lifted) <= std::exp(eps_c) * c;
    return std::vector<bool>{p1, r1, r2};
  };
  const double t2 = eps_c + margin_above;
  region.draw = [t2, region_check = region.check](
                    double margin) -> std::optional<std::vector<double>> {
    // Both P1 and R2 relax as theta1 grows (the rare mass shrinks toward 0,
    // pushing the audit's floored power toward ln((1+c)/... ) < eps_c side);
    // bisect the smallest passing theta1 and step inside.
    auto ok = [&](double t1) {
      const auto truth = region_check({t1, t2});
      return truth[0] && truth[1] && truth[2];
    };
    double hi = 1.0;
    int guard = 0;
    while (!ok(hi) && guard++ < 60) hi *= 2.0;
    if (!ok(hi)) return std::nullopt;
    double lo = 1e-6;
    if (ok(lo)) {
      return std::vector<double>{lo * (1.0 + margin), t2};
    }
    while (hi - lo > kBisectTol) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
    return std::vector<double>{hi * (1.0 + std::max(margin, 0.05)), t2};
  };
  return region;
}

ParamRegion AdaptedLaplaceMplParams(double tau, double eps_c) {
  if (tau <= 0.0) {
    throw std::invalid_argument("AdaptedLaplaceMplParams: tau <= 0");
  }
  if (eps_c <= 0.0) {
    throw std::invalid_argument("AdaptedLaplaceMplParams: eps_c <= 0");
  }
  ParamRegion region;
  region.family = Family::kAdaptedLaplace;
  region.theorem_id = "adapted_laplace_mpl";
  region.labels = {"R2"};
  region.check = [eps_c](const std::vector<double>& p) {
    const double t = p.at(0);
    return std::vector<bool>{t > 0.0 && t <= eps_c};
  };
  region.has_interval = true;
  region.lo = 0.0;
  region.hi = eps_c;
  region.draw = [eps_c](double margin) -> std::optional<std::vector<double>> {
    return std::vector<double>{eps_c * (1.0 - std::max(margin, 0.02))};
  };
  return region;
}

ParamRegion AdaptedSvtMplParams(double tau, double eps_c, double margin_above) {
  if (tau <= 0.0) {
    throw std::invalid_argument("AdaptedSvtMplParams: tau <= 0");
  }
  ParamRegion region;
  region.family = Family::kAdaptedSvt;
  region.theorem_id = "adapted_svt_mpl";
  region.labels = {"P1", "R1", "R2"};
  region.check = [tau, eps_c](const std::vector<double>& p) {
    const double t1 = p.at(0);
    const double t2 = p.at(1);
    if (t1 <= 0.0 || t2 <= 0.0) {
      return std::vector<bool>{false, false, false};
    }
    const double g = AdaptedSvtRareMassFormula(t1, t2);
    return std::vector<bool>{g < tau, t2 > eps_c,
                             std::exp(t2) * g <= std::exp(eps_c) * tau};
  };
  const double t2 = eps_c + margin_above;
  region.draw = [t2, region_check = region.check](
                    double margin) -> std::optional<std::vector<double>> {
    auto ok = [&](double t1) {
      const auto truth = region_check({t1, t2});
      return truth[0] && truth[1] && truth[2];
    };
    double hi = 1.0;
    int guard = 0;
    while (!ok(hi) && guard++ < 60) hi *= 2.0;
    if (!ok(hi)) return std::nullopt;
    double lo = 1e-6;
    if (!ok(lo)) {
      while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
      }
      lo = hi;
    }
    return std::vector<double>{lo * (1.0 + std::max(margin, 0.05)), t2};
  };
  return region;
}

ParamRegion RapporSniperRegion(double c, double eps_c, int h) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument("RapporSniperRegion: c outside (0, 1/2)");
  }
  if (h < 1) throw std::invalid_argument("RapporSniperRegion: h < 1");
  ParamRegion region;
  region.family = Family::kRapporOneTime;
  region.theorem_id = "rappor_sniper";
  region.labels = {"P1", "R1", "side", "R2"};
  auto p1 = [c, h](double theta) { return RapporStarMassFar(theta, h) < c; };
  auto r1 = [eps_c, h](double theta) {
    return 2.0 * h *
               (std::log(1.0 - 0.5 * theta) - std::log(0.5 * theta)) >
           eps_c;
  };
  // The tie extension must stay within the second-ratio set: the two top
  // ratio classes together must carry at least c under the far input.
  auto side = [c, h](double theta) {
    const double star = RapporStarMassFar(theta, h);
    const double second =
        2.0 * h * (1.0 - 0.5 * theta) * std::pow(0.5 * theta, 2 * h - 1);
    return star + second >= c;
  };
  auto r2 = [c, eps_c, h](double theta) {
    return RapporSniperPowerFormula(theta, c, h) <= eps_c;
  };
  region.check = [p1, r1, side, r2](const std::vector<double>& p) {
    const double theta = p.at(0);
    return std::vector<bool>{p1(theta), r1(theta), side(theta), r2(theta)};
  };
  const IntervalScan scan =
      ResolveInterval({p1, r1, side, r2}, 1e-4, 1.0 - 1e-4, false);
  FinishIntervalRegion(region, scan);
  return region;
}

double GaussianDeltaSiegePower(double theta, double sensitivity, double c,
                               double delta_c, const SurrogateFn& rho) {
  const double mu = sensitivity / theta;
  auto beta_of = [mu](double alpha) {
    return NormalCdf(NormalQuantile(1.0 - alpha) - mu);
  };
  auto rho_at_alpha = [&](double alpha) {
    const double power = 1.0 - beta_of(alpha);
    if (power <= alpha) return kInf;
    const double eps_max = std::log(power / alpha);
    auto along = [&](double eps) {
      const double delta = power - std::exp(eps) * alpha;
      return rho(eps, std::max(delta, 0.0));
    };
    double best = std::min(along(0.0), along(eps_max));
    best = std::min(best, along(GoldenMin(along, 0.0, eps_max)));
    return best;
  };
  const double lo = std::log(std::max(c, 1e-12));
  const double hi = std::log(1.0 - 1e-9);
  double rho_star = kInf;
  double best_la = lo;
  const int kGrid = 600;
  for (int i = 1; i < kGrid; ++i) {
    const double la = lo + (hi - lo) * i / kGrid;
    const double v = rho_at_alpha(std::exp(la));
    if (v < rho_star) {
      rho_star = v;
      best_la = la;
    }
  }
  auto in_log = [&](double la) { return rho_at_alpha(std::exp(la)); };
  const double la_opt =
      GoldenMin(in_log, std::max(lo, best_la - (hi - lo) / kGrid),
                std::min(hi, best_la + (hi - lo) / kGrid));
  rho_star = std::min(rho_star, in_log(la_opt));
  if (std::isinf(rho_star)) return 0.0;
  if (rho(0.0, delta_c) <= rho_star) return 0.0;
  double a = 0.0, b = 50.0;
  if (rho(b, delta_c) >= rho_star) return b;
  while (b - a > 1e-9) {
    const double mid = 0.5 * (a + b);
    (rho(mid, delta_c) > rho_star ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

RegionPair GaussianDeltaSiegeRegions(double c, double delta_c, double eps_c,
                                     const SurrogateFn& rho) {
  if (delta_c <= 0.0) {
    throw std::invalid_argument("GaussianDeltaSiegeRegions: delta_c <= 0");
  }
  auto eps_star_of = [delta_c](double theta) {
    MechanismSpec spec;
    spec.family = Family::kGaussian;
    spec.params = {theta};
    return EpsStarOrInf(spec, delta_c);
  };
  auto xi_of = [c, delta_c, &rho](double theta) {
    return GaussianDeltaSiegePower(theta, 1.0, c, delta_c, rho);
  };
  auto r2_fp = [xi_of, eps_c](double theta) { return xi_of(theta) <= eps_c; };
  auto r1_fp = [eps_star_of, eps_c](double theta) {
    return eps_c < eps_star_of(theta);
  };
  auto r4_fn = [xi_of, eps_c](double theta) { return xi_of(theta) > eps_c; };
  auto r3_fn = [eps_star_of, eps_c](double theta) {
    return eps_c >= eps_star_of(theta);
  };

  RegionPair out;
  out.fp.family = Family::kGaussian;
  out.fp.theorem_id = "gaussian_deltasiege_fp";
  out.fp.labels = {"R2", "R1"};
  out.fp.check = [r2_fp, r1_fp](const std::vector<double>& p) {
    return std::vector<bool>{r2_fp(p.at(0)), r1_fp(p.at(0))};
  };
  FinishIntervalRegion(out.fp, ResolveInterval({r2_fp, r1_fp}, 0.05, 30.0,
                                               false));

  out.fn.family = Family::kGaussian;
  out.fn.theorem_id = "gaussian_deltasiege_fn";
  out.fn.labels = {"R4", "R3"};
  out.fn.check = [r4_fn, r3_fn](const std::vector<double>& p) {
    return std::vector<bool>{r4_fn(p.at(0)), r3_fn(p.at(0))};
  };
  FinishIntervalRegion(out.fn, ResolveInterval({r4_fn, r3_fn}, 0.05, 30.0,
                                               false));
  return out;
}

ParamRegion DpsgdFpRegion(double c, double delta_c, double eps_c,
                          const DpsgdConfig& dpsgd) {
  if (c <= 0.0 || c >= 0.5) {
    throw std::invalid_argument("DpsgdFpRegion: c outside (0, 1/2)");
  }
  ParamRegion region;
  region.family = Family::kDpsgdOneStep;
  region.theorem_id = "dpsgd_fp";
  region.labels = {"R2", "R1"};
  const double clip = dpsgd.clip_norm;
  auto r2 = [c, delta_c, eps_c](double theta) {
    // mu = clip / (theta * clip): the one-step statistic is Gaussian with
    // mean separation clip and standard deviation theta * clip.
    const double beta_c = NormalCdf(NormalQuantile(1.0 - c) - 1.0 / theta);
    const double top = 1.0 - delta_c - beta_c;
    if (top <= 0.0) return true;
    return std::log(top) - std::log(c) <= eps_c;
  };
  auto r1 = [clip, delta_c, eps_c, dpsgd](double theta) {
    MechanismSpec spec;
    spec.family = Family::kDpsgdOneStep;
    spec.params = {theta};
    spec.sensitivity = clip;
    spec.dpsgd = dpsgd;
    return eps_c < EpsStarOrInf(spec, delta_c);
  };
  region.check = [r2, r1](const std::vector<double>& p) {
    return std::vector<bool>{r2(p.at(0)), r1(p.at(0))};
  };
  FinishIntervalRegion(region, ResolveInterval({r2, r1}, 0.02, 30.0, false));
  return region;
}

std::string AttackPlan::ToJson() const {
  nlohmann::json j;
  j["mechanism"] = nlohmann::json::parse(spec.ToJson());
  j["eps_c"] = eps_c;
  j["delta_c"] = delta_c;
  j["auditor"] = AuditorName(auditor);
  j["theorem"] = theorem_id;
  j["margin"] = margin;
  return j.dump(2);
}

AttackPlan ConstructAttack(const AttackRequest& request) {
  AttackPlan plan;
  plan.eps_c = request.eps_c;
  plan.delta_c = request.delta_c;
  plan.auditor = request.auditor;
  plan.margin = request.margin;

  auto from_region = [&](const ParamRegion& region) {
    auto params = region.Sample(request.margin);
    if (!params.has_value()) return false;
    plan.spec = BenchmarkSpec(region.family, *params);
    plan.theorem_id = region.theorem_id;
    return true;
  };

  switch (request.auditor) {
    case Auditor::kDpSniper: {
      if (request.family == Family::kLaplace) {
        if (from_region(LaplaceSniperRegion(request.c, request.eps_c))) {
          return plan;
        }
        if (from_region(
                AdaptedLaplaceSniperParams(request.c, request.eps_c))) {
          return plan;
        }
        throw AttackUnavailableError("no Laplace attack for this claim");
      }
      if (request.family == Family::kSvt) {
        if (from_region(SvtSniperRegion(request.c, request.eps_c))) {
          return plan;
        }
        if (from_region(AdaptedSvtSniperParams(request.c, request.eps_c))) {
          return plan;
        }
        throw AttackUnavailableError("no SVT attack for this claim");
      }
      if (request.family == Family::kRapporOneTime) {
        // The only tunable parameter is the flip probability, so there is no
        // separate adapted variant to fall back to.
        if (from_region(RapporSniperRegion(request.c, request.eps_c, 2))) {
          plan.spec.rappor.hash_count = 2;
          return plan;
        }
        throw AttackUnavailableError("no RAPPOR attack for this claim");
      }
      break;
    }
    case Auditor::kMpl: {
      if (request.family == Family::kLaplace) {
        const ParamRegion region =
            AdaptedLaplaceMplParams(request.tau, request.eps_c);
        auto params = region.Sample(std::max(request.margin, 0.1));
        if (!params.has_value()) {
          throw AttackUnavailableError("no Laplace attack for this claim");
        }
        const double t1 = params->at(0);
        // Flat-tail height tau/2: half the density floor, so the density
        // audit never sees past the core and reports the core rate.
        const double t2 = std::log(t1 / request.tau) / t1;
        plan.spec = BenchmarkSpec(Family::kAdaptedLaplace, {t1, t2});
        plan.theorem_id = region.theorem_id;
        return plan;
      }
      if (request.family == Family::kSvt) {
        if (from_region(AdaptedSvtMplParams(request.tau, request.eps_c))) {
          return plan;
        }
        throw AttackUnavailableError("no SVT attack for this claim");
      }
      if (request.family == Family::kRapporOneTime) {
        throw UnsupportedCombinationError(
            "RAPPOR against the density-ratio audit has no region solver");
      }
      break;
    }
    case Auditor::kDeltaSiege: {
      if (request.family == Family::kGaussian) {
        const RegionPair regions = GaussianDeltaSiegeRegions(
            request.c, request.delta_c, request.eps_c,
            SurrogateFn::InverseEpsDelta());
        if (from_region(regions.fp)) return plan;
        throw AttackUnavailableError("no Gaussian attack for this claim");
      }
      break;
    }
    case Auditor::kDpsgdAudit: {
      if (request.family == Family::kDpsgdOneStep) {
        DpsgdConfig dpsgd;
        if (from_region(
                DpsgdFpRegion(request.c, request.delta_c, request.eps_c,
                              dpsgd))) {
          return plan;
        }
        throw AttackUnavailableError("no DPSGD attack for this claim");
      }
      break;
    }
  }
  throw UnsupportedCombinationError(
      "no region solver for family " + FamilyName(request.family) +
      " against auditor " + AuditorName(request.auditor));
}

}  // namespace dpaudit
