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

// Fixed-step closed-loop simulation of N robots, each running its own
// indirect adaptive loop, coupled only through repulsive forces.
//
// Per step t and robot i:
//   1. r_i(t) from the input generator
//   2. U_o = Theta2^-1 (Theta1^T x + r)
//   3. F_r and alpha from every robot's position at time t
//   4. U = F_r + alpha U_o
//   5. eps(t) from the filter bank with e_x = xhat - x
//   6. adapt theta, P unless F_r != 0 (adaptation suspended)
//   7. advance estimator and filters with the applied U, then plant and
//      reference model
//
// Robots are independent within a step once positions are snapshotted, so
// step 1-7 run as a data-parallel loop over robots. The serial loop is kept
// as the reference; both produce bitwise identical traces.

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lsmrac/adaptive_laws.hpp"
#include "lsmrac/collision_avoidance.hpp"
#include "lsmrac/system_models.hpp"

namespace lsmrac {

enum class Algorithm { kLeastSquares, kGradient };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct RobotPlantSpec {
  double mass_kg = 18.0;
  double friction = 4.0;  // N s / m
  double dt_s = 0.05;
  bool operator==(const RobotPlantSpec&) const = default;
};

struct MatrixPlantSpec {
  Matrix A;
  Matrix B;
  double dt_s = 1.0;
  bool operator==(const MatrixPlantSpec& o) const {
    return A == o.A && B == o.B && dt_s == o.dt_s;
  }
};

using PlantSpec = std::variant<RobotPlantSpec, MatrixPlantSpec>;

/// Reference built from robot gains placing the per-axis poles, with
/// K2* = input_gain * I. Robot plants only.
struct PoleReferenceSpec {
  double slow_pole = 0.9868;
  double fast_pole = 0.7881;
  double input_gain = -10.0;
  bool operator==(const PoleReferenceSpec&) const = default;
};

/// Reference built from explicit K1*, diag(K2*).
struct GainReferenceSpec {
  Matrix K1;
  Vector k2;
  bool operator==(const GainReferenceSpec& o) const { return K1 == o.K1 && k2 == o.k2; }
};

/// Reference given directly. When theta1_star/theta2_star are absent they
/// are recovered by least squares; `strict` rejects residuals above 1e-9.
struct MatrixReferenceSpec {
  Matrix A_m;
  Matrix B_m;
  std::optional<Matrix> theta1_star;
  std::optional<Vector> theta2_star;
  bool strict = false;
  bool operator==(const MatrixReferenceSpec& o) const {
    return A_m == o.A_m && B_m == o.B_m && theta1_star == o.theta1_star &&
           theta2_star == o.theta2_star && strict == o.strict;
  }
};

using ReferenceSpec = std::variant<PoleReferenceSpec, GainReferenceSpec, MatrixReferenceSpec>;

struct RobotSpec {
  Vector initial_state;
  std::optional<Vector> initial_reference_state;  // defaults to initial_state
  std::optional<Vector> initial_estimate;         // defaults to x_m(0)
  InputGenerator reference_input;

  bool operator==(const RobotSpec& o) const {
    return initial_state == o.initial_state &&
           initial_reference_state == o.initial_reference_state &&
           initial_estimate == o.initial_estimate && reference_input == o.reference_input;
  }
};

struct Theta0Rule {
  enum class Kind { kScaledStar, kExplicit };
  Kind kind = Kind::kScaledStar;
  double scale = 0.625;
  Vector values;  // flat m(n+1) for kExplicit
  bool operator==(const Theta0Rule& o) const {
    return kind == o.kind && scale == o.scale && values == o.values;
  }
};

struct ProjectionSpec {
  bool enabled = true;
  std::optional<Vector> signs;  // defaults to sign(k2*)
  std::optional<Vector> k2_upper;  // defaults to 1000 per channel
  bool operator==(const ProjectionSpec&) const = default;
};

struct AdaptationConfig {
  Algorithm algorithm = Algorithm::kLeastSquares;
  double kappa = 1e-5;
  double p0_scale = 1.0;
  Theta0Rule theta0;
  ProjectionSpec projection;
  double gradient_gain = 1.9;
  bool operator==(const AdaptationConfig&) const = default;
};

struct RunOptions {
  long steps = 8000;
  bool theta_star_known = false;
  double convergence_tolerance = 0.05;
  int theta_stride = 0;  // record theta every k steps; 0 disables
  bool parallel = false;
  bool record_trace = true;
  bool operator==(const RunOptions&) const = default;
};

struct RobotScenario {
  std::string name;
  PlantSpec plant = RobotPlantSpec{};
  ReferenceSpec reference = PoleReferenceSpec{};
  std::vector<RobotSpec> robots;
  AdaptationConfig adaptation;
  RepulsiveConfig collision;
  bool ca_enabled = true;
  RunOptions run;

  bool operator==(const RobotScenario&) const = default;
};

/// Everything derived from a scenario before the first step.
struct ResolvedScenario {
  LtiPlant plant;
  MatchedReference reference;
  MatchingResidual matching_residual;
  double dt_s = 0.0;
  Vector theta_star;
  ThetaVector theta0;
  std::optional<ProjectionBounds> projection;
  std::vector<std::string> warnings;
};

/// Validates the scenario and derives plant, reference and initial estimate.
/// Throws ContractError with a field-path style message on any violation.
ResolvedScenario resolve_scenario(const RobotScenario& scenario);

struct TraceRow {
  long step = 0;
  int robot = 0;
  Vector x;
  Vector x_m;
  Vector e;     // x - x_m
  Vector xhat;
  Vector u;          // applied
  Vector u_track;
  Vector repulsive;
  double alpha = 1.0;
  double eps_norm = 0.0;
  double eps_weighted = 0.0;  // eps^T N^-1 eps of the update, 0 when skipped
  bool suspended = false;
  bool degenerate = false;
  double lyapunov = 0.0;  // NaN unless theta* is known and the law is LS
  double min_surface_distance = 0.0;  // global at this step
  std::optional<Vector> theta;
};

struct SimTrace {
  int robots = 0;
  long steps = 0;
  int n = 0;
  int m = 0;
  double robot_radius = 0.0;
  std::vector<TraceRow> rows;  // index = step * robots + robot
  double wall_clock_s = 0.0;
  std::vector<std::string> warnings;

  const TraceRow& at(long step, int robot) const {
    return rows[static_cast<std::size_t>(step) * robots + robot];
  }
};

struct RobotMetrics {
  double max_abs_error_tail = 0.0;     // last 10% of steps
  std::optional<long> convergence_step;  // first step after which |e|_inf < tol
  double final_eps_norm = 0.0;
  double input_min = 0.0;
  double input_max = 0.0;
  long suspended_steps = 0;
};

struct MetricsSummary {
  std::vector<RobotMetrics> robots;
  double min_surface_distance = 0.0;  // NaN with fewer than two robots
  bool collision = false;
  double wall_clock_s = 0.0;
  double tolerance = 0.0;
};

struct RobotRuntime {
  Vector x;
  Vector x_m;
  EstimatorState estimator;
  FilterBank filters;
  InputGenerator input;
  std::optional<RlsState> rls;
  std::optional<GradientState> gradient;
  RlsStepInfo last_rls;

  const ThetaVector& theta() const { return rls ? rls->theta : gradient->theta; }
};

class Simulation {
 public:
  explicit Simulation(RobotScenario scenario);

  /// Advances every robot one step; throws NumericError naming the step if
  /// any state stops being finite.
  void step();
  void run_to_end();

  long time() const { return t_; }
  int robot_count() const { return static_cast<int>(robots_.size()); }
  const RobotRuntime& robot(int i) const { return robots_[i]; }
  const ResolvedScenario& resolved() const { return resolved_; }
  const RobotScenario& scenario() const { return scenario_; }

  /// Holds theta (and P) fixed while filters and estimator keep running.
  void set_adaptation_frozen(bool frozen) { frozen_ = frozen; }

  /// Rows of the most recent step, one per robot.
  const std::vector<TraceRow>& last_rows() const { return last_rows_; }

  SimTrace take_trace();

 private:
  void step_robot(int i, const std::vector<Vec2>& positions, double min_distance);

  RobotScenario scenario_;
  ResolvedScenario resolved_;
  std::vector<RobotRuntime> robots_;
  std::vector<TraceRow> last_rows_;
  SimTrace trace_;
  long t_ = 0;
  bool frozen_ = false;
};

struct RunResult {
  SimTrace trace;
  MetricsSummary metrics;
};

RunResult run_scenario(const RobotScenario& scenario);

MetricsSummary compute_metrics(const SimTrace& trace, double tolerance);

/// Per-step scalar series used by compare_runs: "tracking_error"
/// (max_i |e_i|_inf), "estimation_error" (max_i |eps_i|_2) or
/// "min_surface_distance".
std::vector<double> metric_series(const SimTrace& trace, const std::string& metric);

/// First step after which `series` stays strictly below `tolerance`.
std::optional<long> settling_step(const std::vector<double>& series, double tolerance);

struct ComparisonReport {
  std::string metric;
  std::vector<double> series_a;
  std::vector<double> series_b;
  double final_a = 0.0;
  double final_b = 0.0;
  double final_delta = 0.0;  // a - b
  double max_abs_delta = 0.0;
  std::optional<long> settle_a;
  std::optional<long> settle_b;
};

struct ComparisonResult {
  RunResult a;
  RunResult b;
  ComparisonReport report;
};

/// Runs both arms and pairs their metric series. Rejects arms with
/// different horizons.
ComparisonResult compare_runs(const RobotScenario& a, const RobotScenario& b,
                              const std::string& metric);

ComparisonReport compare_traces(const SimTrace& a, const SimTrace& b, const std::string& metric,
                                double tolerance);

}  // namespace lsmrac
