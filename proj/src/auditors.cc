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

#include "dpaudit/auditors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "dpaudit/estimators.h"
#include "dpaudit/rng.h"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
constexpr double kEpsCap = 50.0;

const std::map<std::string, Auditor>& AuditorNames() {
  static const auto* names = new std::map<std::string, Auditor>{
      {"dpsniper", Auditor::kDpSniper},
      {"mpl", Auditor::kMpl},
      {"deltasiege", Auditor::kDeltaSiege},
      {"dpsgdaudit", Auditor::kDpsgdAudit},
  };
  return *names;
}

std::vector<double> ScalarValues(const std::vector<OutputSample>& samples) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.kind != OutputKind::kScalar) {
      throw std::invalid_argument("expected scalar outputs");
    }
    v.push_back(s.value);
  }
  return v;
}

double GoldenMin(const std::function<double(double)>& f, double a, double b,
                 int iters = 160) {
  const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-12; ++i) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::string AuditorName(Auditor auditor) {
  for (const auto& [name, value] : AuditorNames()) {
    if (value == auditor) return name;
  }
  throw std::invalid_argument("unknown auditor");
}

Auditor AuditorFromName(const std::string& name) {
  const auto& names = AuditorNames();
  const auto it = names.find(name);
  if (it == names.end()) {
    throw std::invalid_argument("unknown auditor name: " + name);
  }
  return it->second;
}

PowerEstimate DpSniperAudit(const PairSampler& sampler,
                            const DpSniperConfig& config) {
  if (config.c <= 0.0 || config.c >= 0.5) {
    throw std::invalid_argument("DpSniperAudit: c must be in (0, 1/2)");
  }
  if (config.n_train == 0 || config.n_est == 0) {
    throw std::invalid_argument("DpSniperAudit: empty budget");
  }
  Rng meta(config.seed);
  const uint64_t seed_train_a = meta.NextU64();
  const uint64_t seed_train_b = meta.NextU64();
  const uint64_t seed_cal = meta.NextU64();
  const uint64_t seed_est_a = meta.NextU64();
  const uint64_t seed_est_b = meta.NextU64();
  Rng tie_rng(meta.NextU64());

  const auto train_a = DrawBatch(sampler.a, seed_train_a, config.n_train);
  const auto train_b = DrawBatch(sampler.a_prime, seed_train_b, config.n_train);
  const RatioModel model = FitRatioModel(train_a, train_b);

  // Calibrate (t, q) on fresh a' samples so Pr[M(a') in S] = c empirically.
  const auto cal = DrawBatch(sampler.a_prime, seed_cal, config.n_est);
  std::vector<double> cal_scores;
  cal_scores.reserve(cal.size());
  for (const auto& s : cal) cal_scores.push_back(model.Score(s));
  std::sort(cal_scores.begin(), cal_scores.end(), std::greater<double>());
  const size_t k = std::min(
      cal_scores.size() - 1,
      static_cast<size_t>(config.c * static_cast<double>(cal_scores.size())));
  const double t = cal_scores[k];
  size_t above = 0;
  size_t eq = 0;
  for (double s : cal_scores) {
    if (s > t) {
      ++above;
    } else if (s == t) {
      ++eq;
    }
  }
  double q = (config.c * static_cast<double>(cal_scores.size()) -
              static_cast<double>(above)) /
             static_cast<double>(eq);
  q = std::clamp(q, 0.0, 1.0);

  // Estimate both membership probabilities on fresh samples.
  const auto est_a = DrawBatch(sampler.a, seed_est_a, config.n_est);
  const auto est_b = DrawBatch(sampler.a_prime, seed_est_b, config.n_est);
  auto count_members = [&](const std::vector<OutputSample>& batch) {
    int hits = 0;
    for (const auto& s : batch) {
      const double score = model.Score(s);
      if (score > t) {
        ++hits;
      } else if (score == t && tie_rng.Bernoulli(q)) {
        ++hits;
      }
    }
    return hits;
  };
  const int sa = count_members(est_a);
  const int sb = count_members(est_b);
  const int n = static_cast<int>(config.n_est);

  PowerEstimate out;
  out.sample_count = 2 * config.n_train + 3 * config.n_est;
  out.confidence = config.confidence;
  const double pa = TruncateProbability(static_cast<double>(sa) / n, config.c);
  const double pb = TruncateProbability(static_cast<double>(sb) / n, config.c);
  out.xi_star = std::log(pa) - std::log(pb);
  out.ci_low =
      std::log(TruncateProbability(BinomialLowerBound(sa, n, config.confidence),
                                   config.c)) -
      std::log(TruncateProbability(BinomialUpperBound(sb, n, config.confidence),
                                   config.c));
  out.ci_high = kInf;

  WitnessSet w;
  w.ratio_threshold = t;
  w.tie_probability = q;
  w.include_above = true;
  w.membership = [model, t, q](const OutputSample& o) {
    const double s = model.Score(o);
    if (s > t) return 1.0;
    if (s == t) return q;
    return 0.0;
  };
  if (model.discrete()) {
    // Explicit element form over the observed classes, so the witness is
    // evaluable without the fitted model.
    std::map<std::string, OutputSample> seen;
    for (const auto& s : train_a) seen.emplace(s.Key(), s);
    for (const auto& s : train_b) seen.emplace(s.Key(), s);
    for (const auto& s : est_a) seen.emplace(s.Key(), s);
    for (const auto& s : est_b) seen.emplace(s.Key(), s);
    w.use_elements = true;
    for (const auto& [key, rep] : seen) {
      const double s = model.Score(rep);
      if (s > t) {
        w.elements.push_back(rep);
      } else if (s == t && !w.has_tie_element) {
        w.has_tie_element = true;
        w.tie_element = rep;
      }
    }
  }
  out.witness = std::move(w);
  return out;
}

namespace {

struct DiscreteCounts {
  std::map<std::string, std::pair<int, int>> counts;
  std::map<std::string, OutputSample> reps;
};

DiscreteCounts CountClasses(const std::vector<OutputSample>& a,
                            const std::vector<OutputSample>& b) {
  DiscreteCounts t;
  for (const auto& s : a) {
    t.counts[s.Key()].first++;
    t.reps.emplace(s.Key(), s);
  }
  for (const auto& s : b) {
    t.counts[s.Key()].second++;
    t.reps.emplace(s.Key(), s);
  }
  return t;
}

PowerEstimate MplDiscrete(const std::vector<OutputSample>& samples_a,
                          const std::vector<OutputSample>& samples_b,
                          const MplConfig& config, Rng& rng) {
  const double n = static_cast<double>(samples_a.size());
  DiscreteCounts t = CountClasses(samples_a, samples_b);
  double best = -kInf;
  std::string best_key;
  int best_ca = 0;
  int best_cb = 0;
  for (const auto& [key, cnt] : t.counts) {
    const double ma = TruncateDensity(cnt.first / n, config.tau);
    const double mb = TruncateDensity(cnt.second / n, config.tau);
    const double v = std::fabs(std::log(ma) - std::log(mb));
    if (v > best) {
      best = v;
      best_key = key;
      best_ca = cnt.first;
      best_cb = cnt.second;
    }
  }
  if (best_key.empty()) {
    throw std::runtime_error("MplAudit: no observed outputs");
  }
  PowerEstimate out;
  out.xi_star = best;
  out.confidence = config.confidence;
  out.sample_count = samples_a.size() + samples_b.size();
  // Bootstrap over the class counts at the selected class.
  std::vector<double> boot;
  boot.reserve(config.bootstrap);
  auto redraw = [&](int cnt) {
    const double p = cnt / n;
    const double sd = std::sqrt(std::max(n * p * (1.0 - p), 0.0));
    const double v = std::round(cnt + sd * rng.Gaussian(1.0));
    return std::clamp(v, 0.0, n);
  };
  for (int i = 0; i < config.bootstrap; ++i) {
    const double ma = TruncateDensity(redraw(best_ca) / n, config.tau);
    const double mb = TruncateDensity(redraw(best_cb) / n, config.tau);
    boot.push_back(std::fabs(std::log(ma) - std::log(mb)));
  }
  std::sort(boot.begin(), boot.end());
  out.ci_low = boot[static_cast<size_t>((1.0 - config.confidence) *
                                        (boot.size() - 1))];
  out.ci_high = kInf;
  out.witness.use_elements = true;
  out.witness.elements.push_back(t.reps.at(best_key));
  return out;
}

}  // namespace

PowerEstimate MplAudit(const PairSampler& sampler, const MplConfig& config) {
  if (config.tau <= 0.0) {
    throw std::invalid_argument("MplAudit: tau must be positive");
  }
  Rng meta(config.seed);
  const uint64_t sa_seed = meta.NextU64();
  const uint64_t sb_seed = meta.NextU64();
  Rng boot_rng(meta.NextU64());
  const auto samples_a = DrawBatch(sampler.a, sa_seed, config.n);
  const auto samples_b = DrawBatch(sampler.a_prime, sb_seed, config.n);
  if (samples_a.empty() || samples_a.front().kind != OutputKind::kScalar) {
    return MplDiscrete(samples_a, samples_b, config, boot_rng);
  }

  const std::vector<double> va = ScalarValues(samples_a);
  const std::vector<double> vb = ScalarValues(samples_b);
  const size_t half = va.size() / 2;
  const std::vector<double> va_sel(va.begin(), va.begin() + half);
  const std::vector<double> va_est(va.begin() + half, va.end());
  const std::vector<double> vb_sel(vb.begin(), vb.begin() + half);
  const std::vector<double> vb_est(vb.begin() + half, vb.end());

  const DensityModel da_sel = KdeFit(va_sel, config.bandwidth);
  const DensityModel db_sel = KdeFit(vb_sel, config.bandwidth);
  DensityModel da_est = KdeFit(va_est, config.bandwidth);
  DensityModel db_est = KdeFit(vb_est, config.bandwidth);

  // Candidate points: the grids of both selection models, restricted to
  // where both selection densities clear the floor, so the truncation never
  // manufactures power out of estimation noise in unsampled regions. The
  // selection objective subtracts two standard errors of the log ratio;
  // without the penalty the argmax drifts into the far tails, where relative
  // kernel-density noise grows like 1/sqrt(n h p) and the maximum over
  // thousands of candidates is biased upward. Candidates whose log-ratio
  // standard error exceeds a cap are dropped outright: the penalty bounds
  // the selection bias but not the variance of the estimate evaluated at
  // the winner, and a tail candidate that wins by fluctuation would carry
  // that variance into the report.
  const double kKernelRoughness = 0.5 / std::sqrt(kPi);  // integral of K^2
  const double kMaxLogRatioSe = 0.1;
  double best = -kInf;
  double best_x = 0.0;
  auto consider = [&](double lo, double hi) {
    const int kNodes = 4096;
    for (int i = 0; i < kNodes; ++i) {
      const double x = lo + (hi - lo) * i / (kNodes - 1);
      const double pa = da_sel.Evaluate(x);
      const double pb = db_sel.Evaluate(x);
      if (pa < config.tau || pb < config.tau) continue;
      const double var_log =
          kKernelRoughness / (half * da_sel.bandwidth() * pa) +
          kKernelRoughness / (half * db_sel.bandwidth() * pb);
      if (std::sqrt(var_log) > kMaxLogRatioSe) continue;
      const double v =
          std::fabs(std::log(pa) - std::log(pb)) - 2.0 * std::sqrt(var_log);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  };
  consider(da_sel.grid_lo(), da_sel.grid_hi());
  consider(db_sel.grid_lo(), db_sel.grid_hi());
  if (best == -kInf) {
    throw std::runtime_error("MplAudit: no candidate cleared the floor");
  }

  auto xi_at = [&](const DensityModel& ma, const DensityModel& mb) {
    const double pa = TruncateDensity(ma.Evaluate(best_x), config.tau);
    const double pb = TruncateDensity(mb.Evaluate(best_x), config.tau);
    return std::fabs(std::log(pa) - std::log(pb));
  };

  PowerEstimate out;
  out.xi_star = xi_at(da_est, db_est);
  out.confidence = config.confidence;
  out.sample_count = 2 * config.n;
  std::vector<double> boot;
  boot.reserve(config.bootstrap);
  for (int i = 0; i < config.bootstrap; ++i) {
    boot.push_back(xi_at(da_est.Resampled(boot_rng), db_est.Resampled(boot_rng)));
  }
  std::sort(boot.begin(), boot.end());
  out.ci_low = boot[static_cast<size_t>((1.0 - config.confidence) *
                                        (boot.size() - 1))];
  out.ci_high = kInf;
  out.witness.use_elements = true;
  OutputSample point;
  point.value = best_x;
  out.witness.elements.push_back(point);
  return out;
}

SurrogateFn::SurrogateFn(Fn fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)) {
  // Non-increasing in both arguments, checked on a coarse grid.
  const double eps_grid[] = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  const double delta_grid[] = {1e-6, 1e-4, 1e-2, 0.1, 0.5, 0.9};
  for (double d : delta_grid) {
    double prev = kInf;
    for (double e : eps_grid) {
      const double v = fn_(e, d);
      if (v > prev * (1.0 + 1e-12)) {
        throw std::invalid_argument("SurrogateFn: not non-increasing in eps");
      }
      prev = v;
    }
  }
  for (double e : eps_grid) {
    double prev = kInf;
    for (double d : delta_grid) {
      const double v = fn_(e, d);
      if (v > prev * (1.0 + 1e-12)) {
        throw std::invalid_argument("SurrogateFn: not non-increasing in delta");
      }
      prev = v;
    }
  }
}

SurrogateFn SurrogateFn::InverseEpsDelta() {
  return SurrogateFn(
      [](double eps, double delta) {
        if (delta <= 0.0) return kInf;
        return std::exp(-eps) / delta;
      },
      "inv_eps_delta");
}

SurrogateFn SurrogateFn::ScaleOverEps(double scale) {
  if (scale <= 0.0) throw std::invalid_argument("ScaleOverEps: scale <= 0");
  return SurrogateFn(
      [scale](double eps, double) {
        if (eps <= 0.0) return kInf;
        return scale / eps;
      },
      "scale_over_eps");
}

SurrogateFn SurrogateFn::ExpOverDelta(double k) {
  if (k <= 0.0) throw std::invalid_argument("ExpOverDelta: k <= 0");
  return SurrogateFn(
      [k](double eps, double delta) {
        if (delta <= 0.0) return kInf;
        return std::exp(-k * eps) / delta;
      },
      "exp_over_delta");
}

SurrogateFn SurrogateFn::FromFunction(Fn fn, std::string name) {
  return SurrogateFn(std::move(fn), std::move(name));
}

PowerEstimate DeltaSiegeAudit(const PairSampler& sampler, const SurrogateFn& rho,
                              const DeltaSiegeConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("DeltaSiegeAudit: runs < 1");
  PowerEstimate best_run;
  best_run.xi_star = -kInf;
  for (int run = 0; run < config.runs; ++run) {
    Rng meta(config.seed + static_cast<uint64_t>(run) * 0x9e3779b97f4a7c15ULL);
    const auto train_a = DrawBatch(sampler.a, meta.NextU64(), config.n / 2);
    const auto train_b =
        DrawBatch(sampler.a_prime, meta.NextU64(), config.n / 2);
    const auto est_a = DrawBatch(sampler.a, meta.NextU64(), config.n / 2);
    const auto est_b =
        DrawBatch(sampler.a_prime, meta.NextU64(), config.n / 2);
    const RatioModel model = FitRatioModel(train_a, train_b);

    std::vector<double> scores_a;
    std::vector<double> scores_b;
    for (const auto& s : est_a) scores_a.push_back(model.Score(s));
    for (const auto& s : est_b) scores_b.push_back(model.Score(s));
    std::sort(scores_a.begin(), scores_a.end(), std::greater<double>());
    std::sort(scores_b.begin(), scores_b.end(), std::greater<double>());
    const int m = static_cast<int>(scores_a.size());

    // Candidate thresholds: the distinct observed scores. S is the strict
    // upper set of each threshold.
    std::vector<double> thresholds = scores_a;
    thresholds.insert(thresholds.end(), scores_b.begin(), scores_b.end());
    std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                     thresholds.end());

    double rho_star = kInf;
    double best_alpha = std::nan("");
    double best_beta = std::nan("");
    double best_t = 0.0;
    for (double t : thresholds) {
      const int sa = static_cast<int>(
          std::upper_bound(scores_a.begin(), scores_a.end(), t,
                           std::greater<double>()) -
          scores_a.begin());
      const int sb = static_cast<int>(
          std::upper_bound(scores_b.begin(), scores_b.end(), t,
                           std::greater<double>()) -
          scores_b.begin());
      const double alpha_emp = static_cast<double>(sb) / m;
      if (alpha_emp <= config.c) continue;  // type I floor
      // One-sided bounds make the witnessed (eps, delta) line hold with the
      // configured confidence.
      const double power_lo = BinomialLowerBound(sa, m, config.confidence);
      const double alpha_hi = BinomialUpperBound(sb, m, config.confidence);
      if (power_lo <= alpha_hi) continue;
      const double eps_max = std::log(power_lo / alpha_hi);
      auto along_line = [&](double eps) {
        const double delta = power_lo - std::exp(eps) * alpha_hi;
        return rho(eps, std::max(delta, 0.0));
      };
      double cand = std::min(along_line(0.0), along_line(eps_max));
      const double eps_opt = GoldenMin(along_line, 0.0, eps_max);
      cand = std::min(cand, along_line(eps_opt));
      if (cand < rho_star) {
        rho_star = cand;
        best_alpha = alpha_emp;
        best_beta = 1.0 - static_cast<double>(sa) / m;
        best_t = t;
      }
    }

    PowerEstimate run_out;
    run_out.confidence = config.confidence;
    run_out.sample_count = 2 * config.n;
    run_out.alpha = best_alpha;
    run_out.beta = best_beta;
    if (rho_star == kInf) {
      run_out.xi_star = 0.0;
    } else if (rho(0.0, config.delta_c) <= rho_star) {
      run_out.xi_star = 0.0;
    } else {
      double lo = 0.0;
      double hi = kEpsCap;
      if (rho(hi, config.delta_c) >= rho_star) {
        run_out.xi_star = kEpsCap;
      } else {
        while (hi - lo > 1e-9) {
          const double mid = 0.5 * (lo + hi);
          if (rho(mid, config.delta_c) > rho_star) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        run_out.xi_star = 0.5 * (lo + hi);
      }
    }
    run_out.ci_low = run_out.xi_star;
    run_out.ci_high = kInf;
    run_out.witness.ratio_threshold = best_t;
    run_out.witness.include_above = true;
    run_out.witness.membership = [model, best_t](const OutputSample& o) {
      return model.Score(o) > best_t ? 1.0 : 0.0;
    };
    if (run_out.xi_star > best_run.xi_star) best_run = std::move(run_out);
  }
  return best_run;
}

PowerEstimate DpsgdAudit(const PairSampler& sampler,
                         const DpsgdAuditConfig& config) {
  if (config.delta_c < 0.0 || config.delta_c >= 1.0) {
    throw std::invalid_argument("DpsgdAudit: bad delta_c");
  }
  Rng meta(config.seed);
  const auto samples_a = DrawBatch(sampler.a, meta.NextU64(), config.n);
  const auto samples_b = DrawBatch(sampler.a_prime, meta.NextU64(), config.n);
  std::vector<double> va = ScalarValues(samples_a);
  std::vector<double> vb = ScalarValues(samples_b);
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  const int n = static_cast<int>(va.size());

  std::vector<double> thresholds = va;
  thresholds.insert(thresholds.end(), vb.begin(), vb.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  auto branch_power = [&](double pa, double pb) {
    double v = -kInf;
    const double num1 = pa - config.delta_c;
    if (num1 > 0.0) {
      v = std::max(v, std::log(num1) -
                          std::log(TruncateProbability(pb, config.c)));
    }
    const double num2 = 1.0 - pb - config.delta_c;
    if (num2 > 0.0) {
      v = std::max(v, std::log(num2) -
                          std::log(TruncateProbability(1.0 - pa, config.c)));
    }
    return v;
  };

  double best = -kInf;
  double best_t = 0.0;
  bool best_upper = true;
  int best_sa = 0;
  int best_sb = 0;
  for (double t : thresholds) {
    // S = {x >= t} and its complement.
    const int sa = n - static_cast<int>(std::lower_bound(va.begin(), va.end(),
                                                         t) -
                                        va.begin());
    const int sb = n - static_cast<int>(std::lower_bound(vb.begin(), vb.end(),
                                                         t) -
                                        vb.begin());
    const double pa = static_cast<double>(sa) / n;
    const double pb = static_cast<double>(sb) / n;
    const double upper = branch_power(pa, pb);
    if (upper > best) {
      best = upper;
      best_t = t;
      best_upper = true;
      best_sa = sa;
      best_sb = sb;
    }
    const double lower = branch_power(1.0 - pa, 1.0 - pb);
    if (lower > best) {
      best = lower;
      best_t = t;
      best_upper = false;
      best_sa = n - sa;
      best_sb = n - sb;
    }
  }
  if (best == -kInf) {
    throw std::runtime_error(
        "DpsgdAudit: delta_c exceeds every feasible numerator");
  }
  PowerEstimate out;
  out.xi_star = best;
  out.confidence = 1.0 - config.significance;
  out.sample_count = 2 * config.n;
  const Interval ci = BayesianInterval(best_sa, best_sb, n, config.significance,
                                       config.delta_c);
  out.ci_low = std::min(ci.lo, best);
  out.ci_high = std::max(ci.hi, best);
  out.witness.use_interval = true;
  if (best_upper) {
    out.witness.interval_lo = best_t;
  } else {
    out.witness.interval_hi = std::nextafter(best_t, -kInf);
  }
  return out;
}

}  // namespace dpaudit
