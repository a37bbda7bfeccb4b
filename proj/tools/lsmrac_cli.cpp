/******************************************************************************
 * Copyright 2026 The lsmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

// lsmrac: command-line front end.
//
//   lsmrac run      --preset paper-3robot-ls --out out/
//   lsmrac compare  --preset paper-3robot --algorithm ls,gradient --out cmp/
//   lsmrac validate --config scenario.json
//   lsmrac presets  [--show NAME]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lsmrac/scenario_config.hpp"
#include "lsmrac/trace_io.hpp"

namespace {

using lsmrac::RobotScenario;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceOptions {
  std::string config;
  std::string preset;
  long steps = 0;
  std::string algorithm;
  std::string ca;
  bool theta_star_known = false;
  bool parallel = false;
};

void add_source_options(CLI::App* cmd, SourceOptions& o) {
  cmd->add_option("--config", o.config, "Scenario JSON file");
  cmd->add_option("--preset", o.preset, "Built-in scenario name");
  cmd->add_option("--steps", o.steps, "Override run.steps")->check(CLI::PositiveNumber);
  cmd->add_flag("--theta-star-known", o.theta_star_known,
                "Record the Lyapunov function V (needs the true parameters)");
  cmd->add_flag("--parallel", o.parallel, "Step robots with OpenMP");
}

std::vector<std::string> split_pair(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

lsmrac::Algorithm parse_algorithm(const std::string& s) {
  if (s == "ls") return lsmrac::Algorithm::kLeastSquares;
  if (s == "gradient") return lsmrac::Algorithm::kGradient;
  throw UsageError("--algorithm expects ls or gradient, got '" + s + "'");
}

bool parse_ca(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw UsageError("--ca expects on or off, got '" + s + "'");
}

RobotScenario load_source(const SourceOptions& o) {
  if (o.config.empty() == o.preset.empty()) {
    throw UsageError("give exactly one of --config or --preset");
  }
  if (!o.config.empty()) return lsmrac::load_config(o.config);
  for (const auto& name : lsmrac::preset_names()) {
    if (name == o.preset) return lsmrac::make_preset(name);
  }
  throw UsageError("unknown preset '" + o.preset + "' (see `lsmrac presets`)");
}

void apply_common(RobotScenario& sc, const SourceOptions& o) {
  if (o.steps > 0) sc.run.steps = o.steps;
  if (o.theta_star_known) sc.run.theta_star_known = true;
  if (o.parallel) sc.run.parallel = true;
}

std::filesystem::path prepare_out(const std::string& dir) {
  if (dir.empty()) throw UsageError("--out DIR is required");
  std::filesystem::create_directories(dir);
  return dir;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void print_metrics(const std::string& label, const lsmrac::MetricsSummary& m) {
  std::printf("%s: min surface distance %.4g m%s, wall clock %.3f s\n", label.c_str(),
              m.min_surface_distance, m.collision ? " (COLLISION)" : "", m.wall_clock_s);
  for (std::size_t i = 0; i < m.robots.size(); ++i) {
    const auto& r = m.robots[i];
    std::printf("  robot %zu: tail |e|max %.3g, settle %s, final |eps| %.3g, u in [%.3f, %.3f]\n",
                i + 1, r.max_abs_error_tail,
                r.convergence_step ? std::to_string(*r.convergence_step).c_str() : "never",
                r.final_eps_norm, r.input_min, r.input_max);
  }
}

int cmd_run(const SourceOptions& o, const std::string& out_dir) {
  RobotScenario sc = load_source(o);
  apply_common(sc, o);
  if (!o.algorithm.empty()) sc.adaptation.algorithm = parse_algorithm(o.algorithm);
  if (!o.ca.empty()) sc.ca_enabled = parse_ca(o.ca);
  const auto out = prepare_out(out_dir);
  print_warnings(lsmrac::validate_scenario(sc).warnings);

  const auto result = lsmrac::run_scenario(sc);
  lsmrac::emit_trace(result.trace, (out / "trace.csv").string());
  lsmrac::emit_metrics(result.metrics, (out / "metrics.json").string());
  std::ofstream(out / "scenario.json") << lsmrac::scenario_to_json(sc) << '\n';
  print_metrics(sc.name.empty() ? "run" : sc.name, result.metrics);
  return kOk;
}

int cmd_compare(const SourceOptions& o, const std::string& out_dir, const std::string& metric) {
  const RobotScenario base = [&] {
    RobotScenario sc = load_source(o);
    apply_common(sc, o);
    return sc;
  }();
  RobotScenario a = base;
  RobotScenario b = base;
  std::string label_a = "a";
  std::string label_b = "b";
  bool paired = false;

  const auto algos = split_pair(o.algorithm.empty() ? "" : o.algorithm);
  if (algos.size() == 2) {
    a.adaptation.algorithm = parse_algorithm(algos[0]);
    b.adaptation.algorithm = parse_algorithm(algos[1]);
    label_a = algos[0];
    label_b = algos[1];
    paired = true;
  } else if (!o.algorithm.empty()) {
    const auto alg = parse_algorithm(o.algorithm);
    a.adaptation.algorithm = alg;
    b.adaptation.algorithm = alg;
  }
  const auto cas = split_pair(o.ca.empty() ? "" : o.ca);
  if (cas.size() == 2) {
    if (paired) throw UsageError("compare varies one knob: pair --algorithm or --ca, not both");
    a.ca_enabled = parse_ca(cas[0]);
    b.ca_enabled = parse_ca(cas[1]);
    label_a = "ca-" + cas[0];
    label_b = "ca-" + cas[1];
    paired = true;
  } else if (!o.ca.empty()) {
    a.ca_enabled = b.ca_enabled = parse_ca(o.ca);
  }
  if (!paired) throw UsageError("compare needs a pair, e.g. --algorithm ls,gradient or --ca on,off");
  if (label_a == label_b) {
    label_a += "-a";
    label_b += "-b";
  }

  const auto out = prepare_out(out_dir);
  print_warnings(lsmrac::validate_scenario(a).warnings);
  lsmrac::validate_scenario(b);
  const auto cmp = lsmrac::compare_runs(a, b, metric);

  lsmrac::emit_trace(cmp.a.trace, (out / ("trace_" + label_a + ".csv")).string());
  lsmrac::emit_trace(cmp.b.trace, (out / ("trace_" + label_b + ".csv")).string());
  lsmrac::emit_metrics(cmp.a.metrics, (out / ("metrics_" + label_a + ".json")).string());
  lsmrac::emit_metrics(cmp.b.metrics, (out / ("metrics_" + label_b + ".json")).string());
  lsmrac::emit_comparison(cmp.report, label_a, label_b, (out / "comparison.json").string());
  {
    std::ofstream series(out / "comparison_series.csv");
    series << "step," << metric << '_' << label_a << ',' << metric << '_' << label_b
           << ",delta\n";
    char buf[96];
    for (std::size_t k = 0; k < cmp.report.series_a.size(); ++k) {
      const double x = cmp.report.series_a[k];
      const double y = cmp.report.series_b[k];
      std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g\n", k, x, y, x - y);
      series << buf;
    }
    if (!series) throw std::runtime_error("write to comparison_series.csv failed");
  }

  print_metrics(label_a, cmp.a.metrics);
  print_metrics(label_b, cmp.b.metrics);
  const auto settle = [](const std::optional<long>& s) {
    return s ? std::to_string(*s) : std::string("never");
  };
  std::printf("%s final: %s %.4g, %s %.4g (delta %.4g); settle step %s vs %s\n", metric.c_str(),
              label_a.c_str(), cmp.report.final_a, label_b.c_str(), cmp.report.final_b,
              cmp.report.final_delta, settle(cmp.report.settle_a).c_str(),
              settle(cmp.report.settle_b).c_str());
  return kOk;
}

int cmd_validate(const SourceOptions& o) {
  RobotScenario sc = load_source(o);
  apply_common(sc, o);
  const auto resolved = lsmrac::validate_scenario(sc);
  print_warnings(resolved.warnings);
  std::printf("ok: %zu robot(s), n=%d, m=%d, %ld steps, matching residual A %.3g B %.3g\n",
              sc.robots.size(), resolved.plant.n(), resolved.plant.m(), sc.run.steps,
              resolved.matching_residual.a_residual, resolved.matching_residual.b_residual);
  return kOk;
}

int cmd_presets(const std::string& show) {
  if (show.empty()) {
    for (const auto& name : lsmrac::preset_names()) std::printf("%s\n", name.c_str());
    return kOk;
  }
  for (const auto& name : lsmrac::preset_names()) {
    if (name == show) {
      std::printf("%s\n", lsmrac::scenario_to_json(lsmrac::make_preset(name)).c_str());
      return kOk;
    }
  }
  throw UsageError("unknown preset '" + show + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares adaptive tracking of planar robots with collision avoidance"};
  app.require_subcommand(1);

  SourceOptions run_opts;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write trace + metrics");
  add_source_options(run, run_opts);
  run->add_option("--algorithm", run_opts.algorithm, "ls or gradient");
  run->add_option("--ca", run_opts.ca, "Collision avoidance on or off");
  run->add_option("--out", run_out, "Output directory")->required();

  SourceOptions cmp_opts;
  std::string cmp_out;
  std::string metric = "tracking_error";
  auto* compare = app.add_subcommand("compare", "Run two arms and report paired metrics");
  add_source_options(compare, cmp_opts);
  compare->add_option("--algorithm", cmp_opts.algorithm, "Pair such as ls,gradient");
  compare->add_option("--ca", cmp_opts.ca, "Pair such as on,off");
  compare->add_option("--metric", metric,
                      "tracking_error, estimation_error or min_surface_distance");
  compare->add_option("--out", cmp_out, "Output directory")->required();

  SourceOptions val_opts;
  auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
  add_source_options(validate, val_opts);

  std::string show;
  auto* presets = app.add_subcommand("presets", "List built-in scenarios");
  presets->add_option("--show", show, "Print one preset as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_opts, run_out);
    if (*compare) return cmd_compare(cmp_opts, cmp_out, metric);
    if (*validate) return cmd_validate(val_opts);
    if (*presets) return cmd_presets(show);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const lsmrac::ConfigError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
