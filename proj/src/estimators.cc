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

#include "dpaudit/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpaudit/stats.h"
#include "json.hpp"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kKdeGridSize = 4096;

struct Features {
  double x0, x1, x2;
};

Features FeaturesOf(double b) { return {b, std::fabs(b), 1.0}; }

// Newton / IRLS for the 3-parameter logistic discriminator. A small ridge
// keeps the normal equations well conditioned when features are collinear.
std::array<double, 3> FitLogistic(const std::vector<double>& xs,
                                  const std::vector<uint8_t>& ys) {
  std::array<double, 3> w = {0.0, 0.0, 0.0};
  const double ridge = 1e-6;
  for (int iter = 0; iter < 40; ++iter) {
    double g[3] = {0, 0, 0};
    double h[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (size_t i = 0; i < xs.size(); ++i) {
      const Features f = FeaturesOf(xs[i]);
      const double fx[3] = {f.x0, f.x1, f.x2};
      double z = w[0] * fx[0] + w[1] * fx[1] + w[2] * fx[2];
      z = std::clamp(z, -30.0, 30.0);
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double r = p - (ys[i] ? 1.0 : 0.0);
      const double s = std::max(p * (1.0 - p), 1e-6);
      for (int j = 0; j < 3; ++j) {
        g[j] += r * fx[j];
        for (int k = 0; k < 3; ++k) h[j][k] += s * fx[j] * fx[k];
      }
    }
    for (int j = 0; j < 3; ++j) {
      g[j] += ridge * w[j];
      h[j][j] += ridge;
    }
    // Solve h * step = g by Gaussian elimination.
    double m[3][4];
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) m[j][k] = h[j][k];
      m[j][3] = g[j];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r2 = col + 1; r2 < 3; ++r2) {
        if (std::fabs(m[r2][col]) > std::fabs(m[piv][col])) piv = r2;
      }
      std::swap(m[col], m[piv]);
      if (std::fabs(m[col][col]) < 1e-14) return w;
      for (int r2 = 0; r2 < 3; ++r2) {
        if (r2 == col) continue;
        const double factor = m[r2][col] / m[col][col];
        for (int k = col; k < 4; ++k) m[r2][k] -= factor * m[col][k];
      }
    }
    double step_norm = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double step = m[j][3] / m[j][j];
      w[j] -= step;
      step_norm += step * step;
    }
    if (step_norm < 1e-16) break;
  }
  return w;
}

double Quantile(std::vector<double> v, double q) {
  const size_t idx = static_cast<size_t>(q * (v.size() - 1));
  std::nth_element(v.begin(), v.begin() + idx, v.end());
  return v[idx];
}

}  // namespace

double RatioModel::Score(const OutputSample& out) const {
  if (degenerate_) return 0.5;
  if (discrete_) {
    auto it = class_posterior_.find(out.Key());
    return it == class_posterior_.end() ? 0.5 : it->second;
  }
  const Features f = FeaturesOf(out.value);
  return weights_[0] * f.x0 + weights_[1] * f.x1 + weights_[2] * f.x2;
}

std::string RatioModel::Serialize() const {
  nlohmann::json j;
  j["discrete"] = discrete_;
  j["degenerate"] = degenerate_;
  if (discrete_) {
    j["class_posterior"] = class_posterior_;
  } else {
    j["weights"] = weights_;
  }
  return j.dump();
}

RatioModel FitRatioModel(const std::vector<OutputSample>& samples_a,
                         const std::vector<OutputSample>& samples_a_prime) {
  if (samples_a.empty() || samples_a_prime.empty()) {
    throw std::invalid_argument("FitRatioModel: empty batch");
  }
  RatioModel model;
  model.discrete_ = samples_a.front().kind != OutputKind::kScalar;
  bool all_same = true;
  const OutputSample& first = samples_a.front();
  for (const auto& s : samples_a) {
    if (!(s == first)) {
      all_same = false;
      break;
    }
  }
  if (all_same) {
    for (const auto& s : samples_a_prime) {
      if (!(s == first)) {
        all_same = false;
        break;
      }
    }
  }
  if (all_same) {
    model.degenerate_ = true;
    return model;
  }
  if (model.discrete_) {
    std::unordered_map<std::string, std::pair<int, int>> counts;
    for (const auto& s : samples_a) counts[s.Key()].first++;
    for (const auto& s : samples_a_prime) counts[s.Key()].second++;
    // Smoothed posterior of label "a" given the class; monotone in the
    // empirical mass ratio.
    const double na = samples_a.size();
    const double nb = samples_a_prime.size();
    for (const auto& [key, cnt] : counts) {
      const double pa = (cnt.first + 0.5) / na;
      const double pb = (cnt.second + 0.5) / nb;
      model.class_posterior_[key] = pa / (pa + pb);
    }
    return model;
  }
  std::vector<double> xs;
  std::vector<uint8_t> ys;
  xs.reserve(samples_a.size() + samples_a_prime.size());
  for (const auto& s : samples_a) {
    xs.push_back(s.value);
    ys.push_back(1);
  }
  for (const auto& s : samples_a_prime) {
    xs.push_back(s.value);
    ys.push_back(0);
  }
  model.weights_ = FitLogistic(xs, ys);
  return model;
}

double DensityModel::Evaluate(double x) const {
  if (total_ == 0) return 0.0;
  const double step = (grid_hi_ - grid_lo_) / (counts_.size() - 1);
  const double inv_h = 1.0 / bandwidth_;
  const double norm = inv_h / std::sqrt(2.0 * M_PI) / total_;
  // Kernels beyond 8 bandwidths contribute nothing at double precision.
  const double reach = 8.0 * bandwidth_;
  const int lo =
      std::max(0, static_cast<int>((x - reach - grid_lo_) / step));
  const int hi = std::min(static_cast<int>(counts_.size()) - 1,
                          static_cast<int>((x + reach - grid_lo_) / step) + 1);
  double sum = 0.0;
  for (int i = lo; i <= hi; ++i) {
    if (counts_[i] == 0.0) continue;
    const double z = (x - (grid_lo_ + i * step)) * inv_h;
    sum += counts_[i] * std::exp(-0.5 * z * z);
  }
  return sum * norm;
}

DensityModel DensityModel::Resampled(Rng& rng) const {
  DensityModel out = *this;
  // Multinomial redraw of the binned counts via sequential binomials.
  std::fill(out.counts_.begin(), out.counts_.end(), 0.0);
  size_t remaining = total_;
  double mass_left = 0.0;
  for (double c : counts_) mass_left += c;
  for (size_t i = 0; i < counts_.size() && remaining > 0; ++i) {
    if (counts_[i] <= 0.0) continue;
    const double p = std::min(1.0, counts_[i] / mass_left);
    size_t draw = 0;
    if (p >= 1.0) {
      draw = remaining;
    } else {
      // Normal approximation with clamping; bins hold many samples at the
      // budgets used here and the bootstrap only needs count-level noise.
      const double mean = remaining * p;
      const double sd = std::sqrt(std::max(remaining * p * (1.0 - p), 1e-12));
      const double g = rng.Gaussian(1.0);
      const double v = std::round(mean + sd * g);
      draw = static_cast<size_t>(std::clamp(
          v, 0.0, static_cast<double>(remaining)));
    }
    out.counts_[i] = static_cast<double>(draw);
    remaining -= draw;
    mass_left -= counts_[i];
  }
  return out;
}

std::string DensityModel::Serialize() const {
  nlohmann::json j;
  j["grid_lo"] = grid_lo_;
  j["grid_hi"] = grid_hi_;
  j["bandwidth"] = bandwidth_;
  j["total"] = total_;
  return j.dump();
}

DensityModel KdeFit(const std::vector<double>& samples, double bandwidth) {
  if (samples.size() < 100) {
    throw std::invalid_argument("KdeFit: need at least 100 samples");
  }
  const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
  const double mn = *mn_it;
  const double mx = *mx_it;
  if (mn == mx) {
    throw std::invalid_argument("KdeFit: samples have zero spread");
  }
  if (bandwidth <= 0.0) {
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= (n - 1);
    const double iqr =
        Quantile(samples, 0.75) - Quantile(samples, 0.25);
    double spread = std::sqrt(var);
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    bandwidth = 0.9 * spread * std::pow(n, -0.2);
  }
  DensityModel model;
  model.bandwidth_ = bandwidth;
  model.grid_lo_ = mn - 1e-9;
  model.grid_hi_ = mx + 1e-9;
  model.total_ = samples.size();
  model.counts_.assign(kKdeGridSize, 0.0);
  const double step = (model.grid_hi_ - model.grid_lo_) / (kKdeGridSize - 1);
  for (double s : samples) {
    // Linear binning: split each sample between its two neighbor nodes.
    const double pos = (s - model.grid_lo_) / step;
    const int i = std::min(kKdeGridSize - 2, static_cast<int>(pos));
    const double frac = pos - i;
    model.counts_[i] += 1.0 - frac;
    model.counts_[i + 1] += frac;
  }
  return model;
}

double TruncateDensity(double density, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("TruncateDensity: tau <= 0");
  return std::max(density, tau);
}

double TruncateProbability(double probability, double c) {
  if (c <= 0.0) throw std::invalid_argument("TruncateProbability: c <= 0");
  return std::max(probability, c);
}

double BinomialLowerBound(int successes, int trials, double confidence) {
  if (confidence <= 0.0 || confidence >= 1.0) {
    throw std::invalid_argument("BinomialLowerBound: bad confidence");
  }
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("BinomialLowerBound: bad counts");
  }
  if (successes == 0) return 0.0;
  return BetaQuantile(successes, trials - successes + 1, 1.0 - confidence);
}

double BinomialUpperBound(int successes, int trials, double confidence) {
  if (confidence <= 0.0 || confidence >= 1.0) {
    throw std::invalid_argument("BinomialUpperBound: bad confidence");
  }
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("BinomialUpperBound: bad counts");
  }
  if (successes == trials) return 1.0;
  return BetaQuantile(successes + 1, trials - successes, confidence);
}

Interval BayesianInterval(int successes_a, int successes_a_prime, int trials,
                          double significance, double delta_c) {
  if (significance <= 0.0 || significance >= 1.0) {
    throw std::invalid_argument("BayesianInterval: bad significance");
  }
  const double tail = significance / 4.0;
  auto post_lo = [&](int s) {
    return BetaQuantile(s + 1, trials - s + 1, tail);
  };
  auto post_hi = [&](int s) {
    return BetaQuantile(s + 1, trials - s + 1, 1.0 - tail);
  };
  const double pa_lo = post_lo(successes_a);
  const double pa_hi = post_hi(successes_a);
  const double pb_lo = post_lo(successes_a_prime);
  const double pb_hi = post_hi(successes_a_prime);
  auto xi = [&](double pa, double pb) {
    double best = -kInf;
    if (pa - delta_c > 0.0 && pb > 0.0) {
      best = std::max(best, std::log(pa - delta_c) - std::log(pb));
    }
    if (1.0 - pb - delta_c > 0.0 && 1.0 - pa > 0.0) {
      best = std::max(best, std::log(1.0 - pb - delta_c) - std::log(1.0 - pa));
    }
    return best;
  };
  Interval out;
  // Both branches are increasing in pa and decreasing in pb, so the corners
  // of the posterior box bound the power.
  out.lo = xi(pa_lo, pb_hi);
  out.hi = xi(pa_hi, pb_lo);
  if (out.lo == -kInf && out.hi == -kInf) out.empty = true;
  return out;
}

}  // namespace dpaudit
