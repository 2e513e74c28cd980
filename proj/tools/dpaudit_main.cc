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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpaudit/fp_analyzer.h"
#include "dpaudit/ground_truth.h"
#include "dpaudit/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAttackUnavailable = 2;
constexpr int kExitIntegrity = 3;

dpaudit::MechanismSpec BuildSpec(const std::string& family,
                                 const std::vector<double>& params,
                                 double sensitivity, int svt_queries) {
  dpaudit::MechanismSpec spec;
  spec.family = dpaudit::FamilyFromName(family);
  spec.params = params;
  spec.sensitivity = sensitivity;
  if (spec.family == dpaudit::Family::kSvt ||
      spec.family == dpaudit::Family::kAdaptedSvt) {
    spec.svt.query_count = svt_queries;
    spec.svt.abort_count = 1;
    spec.svt.thresholds.assign(svt_queries, 1.0);
  }
  if (spec.family == dpaudit::Family::kDpsgdOneStep) {
    spec.sensitivity = spec.dpsgd.clip_norm;
  }
  spec.Validate();
  return spec;
}

void WriteOrPrint(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blackbox differential privacy audit toolkit"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string family = "laplace";
  std::string auditor = "dpsniper";
  std::string pattern = "One Above";
  std::string rho = "inv_eps_delta";
  std::string output;
  std::vector<double> params;
  double sensitivity = 1.0;
  int svt_queries = 1;
  double c = 0.05;
  double tau = 1e-4;
  double eps_c = 1.0;
  double delta_c = 0.0;
  uint64_t seed = 1;
  size_t samples = 100000;

  auto add_common = [&](CLI::App* cmd, bool with_mechanism) {
    if (with_mechanism) {
      cmd->add_option("--family", family, "mechanism family");
      cmd->add_option("--params", params, "mechanism parameter vector");
      cmd->add_option("--sensitivity", sensitivity, "query sensitivity");
      cmd->add_option("--svt-queries", svt_queries, "query count for SVT");
    }
    cmd->add_option("--auditor", auditor,
                    "dpsniper | mpl | deltasiege | dpsgdaudit");
    cmd->add_option("--c", c, "probability floor");
    cmd->add_option("--tau", tau, "density floor");
    cmd->add_option("--eps-c", eps_c, "claimed epsilon");
    cmd->add_option("--delta-c", delta_c, "claimed delta");
    cmd->add_option("--rho", rho, "privacy surrogate");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--samples", samples, "sample budget per input");
    cmd->add_option("--pattern", pattern, "input pattern (One Above, "
                    "One Below, One Below Rest Above, Half Half, "
                    "All Above & All Below, X shape)");
    cmd->add_option("--output", output, "output file (default: stdout)");
  };

  std::string cache_dir = "cache";
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "draw and persist mechanism samples");
  add_common(sample_cmd, true);
  sample_cmd->add_option("--cache-dir", cache_dir, "sample cache directory");

  CLI::App* audit_cmd =
      app.add_subcommand("audit", "run one auditor against one mechanism");
  add_common(audit_cmd, true);

  CLI::App* region_cmd = app.add_subcommand(
      "region", "solve the misclassification parameter region");
  add_common(region_cmd, true);

  CLI::App* attack_cmd = app.add_subcommand(
      "attack", "construct a mechanism that passes the audit while violating "
                "the claim, then confirm end to end");
  add_common(attack_cmd, true);
  bool skip_confirm = false;
  attack_cmd->add_flag("--no-confirm", skip_confirm,
                       "emit the attack manifest without the confirming audit");

  std::string figure = "fig5";
  double budget_scale = 1.0;
  CLI::App* repro_cmd =
      app.add_subcommand("reproduce", "emit one shipped experiment series");
  repro_cmd->add_option("--figure", figure,
                        "fig5 | fig6 | fig7 | fig8 | fig9 | table6 | fig11");
  repro_cmd->add_option("--scale", budget_scale, "sample budget scale");
  repro_cmd->add_option("--seed", seed, "base seed");
  repro_cmd->add_option("--output", output, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample_cmd->parsed()) {
      const auto spec = BuildSpec(family, params, sensitivity, svt_queries);
      const auto pair = dpaudit::GenerateInputs(
          dpaudit::PatternFromName(pattern), dpaudit::InputDimension(spec),
          spec.sensitivity);
      const std::string path_a =
          dpaudit::WriteSampleCache(cache_dir, spec, pair.q_a, seed, samples);
      const std::string path_b = dpaudit::WriteSampleCache(
          cache_dir, spec, pair.q_a_prime, seed + 1, samples);
      std::cout << path_a << '\n' << path_b << '\n';
      return kExitOk;
    }

    if (audit_cmd->parsed()) {
      dpaudit::ExperimentConfig config;
      config.mechanism = BuildSpec(family, params, sensitivity, svt_queries);
      config.grid = {params};
      config.pattern = dpaudit::PatternFromName(pattern);
      config.auditor = dpaudit::AuditorFromName(auditor);
      config.eps_c = eps_c;
      config.delta_c = delta_c;
      config.seed = seed;
      config.rho = rho;
      config.sniper.c = c;
      config.sniper.n_train = config.sniper.n_est = samples;
      config.mpl.tau = tau;
      config.mpl.n = samples;
      config.siege.c = c;
      config.siege.n = samples;
      config.dpsgd_audit.c = c;
      config.dpsgd_audit.n = samples;
      WriteOrPrint(output, dpaudit::RunAudit(config).ToCsv());
      return kExitOk;
    }

    if (region_cmd->parsed()) {
      const dpaudit::Family fam = dpaudit::FamilyFromName(family);
      const dpaudit::Auditor aud = dpaudit::AuditorFromName(auditor);
      std::string csv;
      if (aud == dpaudit::Auditor::kDpSniper &&
          fam == dpaudit::Family::kLaplace) {
        csv = dpaudit::RegionCsv(dpaudit::LaplaceSniperRegion(c, eps_c));
      } else if (aud == dpaudit::Auditor::kDpSniper &&
                 fam == dpaudit::Family::kSvt) {
        csv = dpaudit::RegionCsv(dpaudit::SvtSniperRegion(c, eps_c));
      } else if (aud == dpaudit::Auditor::kDpSniper &&
                 fam == dpaudit::Family::kRapporOneTime) {
        csv = dpaudit::RegionCsv(dpaudit::RapporSniperRegion(c, eps_c, 2));
      } else if (aud == dpaudit::Auditor::kDpSniper &&
                 fam == dpaudit::Family::kAdaptedLaplace) {
        csv = dpaudit::RegionCsv(
            dpaudit::AdaptedLaplaceSniperParams(c, eps_c));
      } else if (aud == dpaudit::Auditor::kDpSniper &&
                 fam == dpaudit::Family::kAdaptedSvt) {
        csv = dpaudit::RegionCsv(dpaudit::AdaptedSvtSniperParams(c, eps_c));
      } else if (aud == dpaudit::Auditor::kMpl &&
                 fam == dpaudit::Family::kAdaptedLaplace) {
        csv = dpaudit::RegionCsv(dpaudit::AdaptedLaplaceMplParams(tau, eps_c));
      } else if (aud == dpaudit::Auditor::kMpl &&
                 fam == dpaudit::Family::kAdaptedSvt) {
        csv = dpaudit::RegionCsv(dpaudit::AdaptedSvtMplParams(tau, eps_c));
      } else if (aud == dpaudit::Auditor::kDeltaSiege &&
                 fam == dpaudit::Family::kGaussian) {
        const auto regions = dpaudit::GaussianDeltaSiegeRegions(
            c, delta_c, eps_c, dpaudit::SurrogateFromName(rho));
        csv = dpaudit::RegionCsv(regions.fp) + dpaudit::RegionCsv(regions.fn);
      } else if (aud == dpaudit::Auditor::kDpsgdAudit &&
                 fam == dpaudit::Family::kDpsgdOneStep) {
        csv = dpaudit::RegionCsv(
            dpaudit::DpsgdFpRegion(c, delta_c, eps_c, dpaudit::DpsgdConfig{}));
      } else {
        throw dpaudit::UnsupportedCombinationError(
            "no region solver for family " + family + " against auditor " +
            auditor);
      }
      WriteOrPrint(output, csv);
      return kExitOk;
    }

    if (attack_cmd->parsed()) {
      dpaudit::AttackRequest request;
      request.family = dpaudit::FamilyFromName(family);
      request.auditor = dpaudit::AuditorFromName(auditor);
      request.eps_c = eps_c;
      request.delta_c = delta_c;
      request.c = c;
      request.tau = tau;
      const dpaudit::AttackPlan plan = dpaudit::ConstructAttack(request);
      std::string text = plan.ToJson() + "\n";
      if (!skip_confirm) {
        dpaudit::ExperimentConfig config;
        config.mechanism = plan.spec;
        config.grid = {plan.spec.params};
        config.pattern = request.family == dpaudit::Family::kDpsgdOneStep
                             ? dpaudit::InputPattern::kOneBelow
                             : dpaudit::InputPattern::kOneAbove;
        if (request.family == dpaudit::Family::kSvt &&
            plan.spec.family == dpaudit::Family::kSvt) {
          config.pattern = dpaudit::InputPattern::kOneBelow;
        }
        config.auditor = request.auditor;
        config.eps_c = eps_c;
        config.delta_c = delta_c;
        config.seed = seed;
        config.rho = rho;
        config.sniper.c = c;
        config.sniper.n_train = config.sniper.n_est = samples;
        config.mpl.tau = tau;
        config.mpl.n = samples;
        config.siege.c = c;
        config.siege.n = samples;
        config.dpsgd_audit.c = c;
        config.dpsgd_audit.n = samples;
        const dpaudit::AuditReport report = dpaudit::RunAudit(config);
        text += report.ToCsv();
        const dpaudit::AuditRecord& record = report.records.front();
        const bool passes = record.estimate.ci_low <= eps_c;
        text += passes ? "attack-confirmed\n" : "attack-refuted\n";
      }
      WriteOrPrint(output, text);
      return kExitOk;
    }

    if (repro_cmd->parsed()) {
      WriteOrPrint(output,
                   dpaudit::ReproduceSeries(figure, budget_scale, seed));
      return kExitOk;
    }
  } catch (const dpaudit::AttackUnavailableError& e) {
    std::cerr << "attack-unavailable: " << e.what() << '\n';
    return kExitAttackUnavailable;
  } catch (const dpaudit::IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
