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

#include "lsmrac/sim_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>

namespace lsmrac {

namespace {

constexpr double kDefaultK2Upper = 1000.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vector projection_upper(const AdaptationConfig& cfg, int m) {
  if (cfg.projection.k2_upper) {
    require(cfg.projection.k2_upper->size() == m,
            "adaptation.projection.k2_upper must have m entries");
    return *cfg.projection.k2_upper;
  }
  return Vector::Constant(m, kDefaultK2Upper);
}

LtiPlant resolve_plant(const PlantSpec& spec, double* dt) {
  if (const auto* robot = std::get_if<RobotPlantSpec>(&spec)) {
    *dt = robot->dt_s;
    return build_robot_plant(robot->mass_kg, robot->friction, robot->dt_s);
  }
  const auto& raw = std::get<MatrixPlantSpec>(spec);
  require(raw.dt_s > 0.0, "plant.dt_s must be positive");
  *dt = raw.dt_s;
  return make_plant(raw.A, raw.B);
}

MatchedReference resolve_reference(const RobotScenario& sc, const LtiPlant& plant,
                                   const Vector& k2_upper) {
  const int m = plant.m();
  if (const auto* poles = std::get_if<PoleReferenceSpec>(&sc.reference)) {
    const auto* robot = std::get_if<RobotPlantSpec>(&sc.plant);
    require(robot != nullptr, "reference.poles requires a robot plant");
    require(poles->input_gain != 0.0, "reference.input_gain must be nonzero");
    const Matrix K1 = robot_gains_for_poles(robot->mass_kg, robot->friction, robot->dt_s,
                                            poles->slow_pole, poles->fast_pole);
    return build_reference_from_gains(plant, K1, Vector::Constant(m, poles->input_gain),
                                      k2_upper);
  }
  if (const auto* gains = std::get_if<GainReferenceSpec>(&sc.reference)) {
    return build_reference_from_gains(plant, gains->K1, gains->k2, k2_upper);
  }
  const auto& mat = std::get<MatrixReferenceSpec>(sc.reference);
  require(mat.A_m.rows() == plant.n() && mat.A_m.cols() == plant.n(),
          "reference.A_m must be n x n");
  require(mat.B_m.rows() == plant.n() && mat.B_m.cols() == m, "reference.B_m must be n x m");
  require(mat.theta1_star.has_value() == mat.theta2_star.has_value(),
          "reference.theta1_star and reference.theta2_star must be given together");
  if (!mat.theta1_star) {
    return match_given_reference(plant, mat.A_m, mat.B_m, k2_upper, mat.strict);
  }
  require(mat.theta1_star->rows() == plant.n() && mat.theta1_star->cols() == m,
          "reference.theta1_star must be n x m");
  require(mat.theta2_star->size() == m, "reference.theta2_star must have m entries");
  MatchedReference out{mat.A_m, mat.B_m,
                       matching_from_theta(*mat.theta1_star, *mat.theta2_star, k2_upper)};
  if (mat.strict) {
    const auto res = verify_matching(plant, out.A_m, out.B_m, out.params);
    require(res.worst() <= 1e-9, "reference: matching residual " + std::to_string(res.worst()) +
                                     " exceeds 1e-9 in strict mode");
  }
  return out;
}

double min_surface_distance(const std::vector<Vec2>& positions, double gamma) {
  double best = kNaN;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const double d = (positions[i] - positions[j]).norm() - 2.0 * gamma;
      if (std::isnan(best) || d < best) best = d;
    }
  }
  return best;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

const char* to_string(Algorithm a) {
  return a == Algorithm::kLeastSquares ? "ls" : "gradient";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "ls") return Algorithm::kLeastSquares;
  if (s == "gradient") return Algorithm::kGradient;
  throw ContractError("unknown algorithm '" + s + "' (expected ls or gradient)");
}

ResolvedScenario resolve_scenario(const RobotScenario& sc) {
  ResolvedScenario out;
  out.plant = resolve_plant(sc.plant, &out.dt_s);
  const int n = out.plant.n();
  const int m = out.plant.m();

  const AdaptationConfig& ad = sc.adaptation;
  require(ad.kappa > 0.0 && std::isfinite(ad.kappa), "adaptation.kappa must be positive");
  require(ad.p0_scale > 0.0 && std::isfinite(ad.p0_scale),
          "adaptation.p0_scale must be positive");
  require(ad.gradient_gain > 0.0 && ad.gradient_gain < 2.0,
          "adaptation.gradient_gain must lie in (0, 2)");

  const Vector k2_upper = projection_upper(ad, m);
  out.reference = resolve_reference(sc, out.plant, k2_upper);
  out.matching_residual =
      verify_matching(out.plant, out.reference.A_m, out.reference.B_m, out.reference.params);
  if (out.matching_residual.worst() > 1e-9) {
    out.warnings.push_back("reference does not match the plant exactly: A residual " +
                           std::to_string(out.matching_residual.a_residual) + ", B residual " +
                           std::to_string(out.matching_residual.b_residual));
  }
  require(spectral_radius(out.reference.A_m) < 1.0,
          "reference: A_m must have spectral radius below 1");

  const auto& params = out.reference.params;
  out.theta_star = ThetaVector::from_parameters(params.Theta1_star, params.theta2_star).flat();

  if (ad.projection.enabled) {
    ProjectionBounds bounds{params.signs, k2_upper};
    if (ad.projection.signs) {
      require(ad.projection.signs->size() == m, "adaptation.projection.signs must have m entries");
      bounds.signs = *ad.projection.signs;
    }
    out.projection = bounds;
  }

  if (ad.theta0.kind == Theta0Rule::Kind::kScaledStar) {
    out.theta0 = ThetaVector(n, m, ad.theta0.scale * out.theta_star);
  } else {
    require(ad.theta0.values.size() == static_cast<Eigen::Index>(m) * (n + 1),
            "adaptation.theta0.values must have m(n+1) entries");
    out.theta0 = ThetaVector(n, m, ad.theta0.values);
  }
  if (out.projection && !satisfies_projection(out.theta0, *out.projection)) {
    out.theta0 = project_theta2(std::move(out.theta0), *out.projection);
    out.warnings.push_back("theta0 violated the projection bounds and was clamped");
  }

  require(!sc.robots.empty(), "robots must contain at least one robot");
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    const auto& r = sc.robots[i];
    const std::string where = "robots[" + std::to_string(i) + "]";
    require(r.initial_state.size() == n, where + ".initial_state must have n entries");
    require(!r.initial_reference_state || r.initial_reference_state->size() == n,
            where + ".initial_reference_state must have n entries");
    require(!r.initial_estimate || r.initial_estimate->size() == n,
            where + ".initial_estimate must have n entries");
    require(r.reference_input.dim() == m, where + ".reference_input must have m entries");
  }

  if (sc.ca_enabled) {
    require(m == 2 && n >= 2, "collision_avoidance requires planar robots (m = 2, n >= 2)");
    sc.collision.validate();
    if (auto w = energy_feasibility_warning(sc.collision)) out.warnings.push_back(*w);
  }

  const RunOptions& run = sc.run;
  require(run.steps >= 1, "run.steps must be at least 1");
  require(run.convergence_tolerance > 0.0, "run.convergence_tolerance must be positive");
  require(run.theta_stride >= 0, "run.theta_stride must be nonnegative");
  return out;
}

Simulation::Simulation(RobotScenario scenario)
    : scenario_(std::move(scenario)), resolved_(resolve_scenario(scenario_)) {
  const int n = resolved_.plant.n();
  const int m = resolved_.plant.m();
  const auto& ref = resolved_.reference;
  const Matrix P0 = scenario_.adaptation.p0_scale *
                    Matrix::Identity(static_cast<Eigen::Index>(m) * (n + 1),
                                     static_cast<Eigen::Index>(m) * (n + 1));
  for (const auto& spec : scenario_.robots) {
    RobotRuntime r;
    r.x = spec.initial_state;
    r.x_m = spec.initial_reference_state.value_or(spec.initial_state);
    r.estimator.xhat = spec.initial_estimate.value_or(r.x_m);
    r.filters = FilterBank(ref.A_m, ref.B_m);
    r.input = spec.reference_input;
    if (scenario_.adaptation.algorithm == Algorithm::kLeastSquares) {
      r.rls = RlsState::make(resolved_.theta0, P0, scenario_.adaptation.kappa,
                             resolved_.projection);
    } else {
      r.gradient = GradientState::with_scalar_gain(
          resolved_.theta0, scenario_.adaptation.gradient_gain, resolved_.projection);
    }
    robots_.push_back(std::move(r));
  }
  last_rows_.resize(robots_.size());

  trace_.robots = robot_count();
  trace_.n = n;
  trace_.m = m;
  trace_.robot_radius = scenario_.collision.gamma;
  trace_.warnings = resolved_.warnings;
  if (scenario_.run.record_trace) {
    trace_.rows.reserve(static_cast<std::size_t>(scenario_.run.steps) * robots_.size());
  }
}

void Simulation::step_robot(int i, const std::vector<Vec2>& positions, double min_distance) {
  RobotRuntime& R = robots_[i];
  const ResolvedScenario& rs = resolved_;
  const int m = rs.plant.m();
  const ThetaVector theta = R.theta();

  TraceRow row;
  row.step = t_;
  row.robot = i;
  row.x = R.x;
  row.x_m = R.x_m;
  row.e = R.x - R.x_m;
  row.xhat = R.estimator.xhat;
  row.min_surface_distance = min_distance;
  if (scenario_.run.theta_stride > 0 && t_ % scenario_.run.theta_stride == 0) {
    row.theta = theta.flat();
  }

  const Vector r = R.input.at(t_);
  row.u_track = control_law(theta, R.x, r);
  row.u = row.u_track;
  row.repulsive = Vector::Zero(m);
  if (scenario_.ca_enabled) {
    const Vec2 u_track(row.u_track(0), row.u_track(1));
    const BlendedInput b =
        blend_tracking_input(positions, i, u_track, scenario_.collision, rs.dt_s);
    row.repulsive = b.repulsive;
    row.alpha = b.alpha;
    row.u = b.applied;
    row.degenerate = b.degenerate;
  }

  const RegressorSnapshot snap = R.filters.assemble_snapshot(theta, R.estimator.xhat - R.x);
  row.eps_norm = snap.epsilon.norm();
  row.lyapunov = (R.rls && scenario_.run.theta_star_known)
                     ? lyapunov_monitor(theta, rs.theta_star, R.rls->P)
                     : kNaN;

  // Adaptation pauses while any repulsive force acts on this robot.
  row.suspended = (row.repulsive.array() != 0.0).any();
  if (!row.suspended && !frozen_) {
    if (R.rls) {
      R.last_rls = rls_update(*R.rls, snap);
      row.eps_weighted = R.last_rls.eps_weighted;
    } else {
      gradient_update(*R.gradient, snap);
    }
  }

  R.estimator = estimator_step(R.estimator, theta, R.x, row.u, rs.reference.A_m,
                               rs.reference.B_m);
  R.filters.update(build_omega(R.x, row.u), theta);
  R.x = plant_step(rs.plant, R.x, row.u);
  R.x_m = rs.reference.A_m * R.x_m + rs.reference.B_m * r;
  last_rows_[i] = std::move(row);
}

void Simulation::step() {
  const auto start = std::chrono::steady_clock::now();
  const int count = robot_count();

  std::vector<Vec2> positions;
  double min_distance = kNaN;
  if (resolved_.plant.n() >= 2) {
    positions.reserve(count);
    for (const auto& r : robots_) positions.emplace_back(r.x(0), r.x(1));
    min_distance = min_surface_distance(positions, scenario_.collision.gamma);
  }

  std::vector<std::exception_ptr> errors(count);
  const bool parallel = scenario_.run.parallel && count > 1;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < count; ++i) {
    try {
      step_robot(i, positions, min_distance);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (int i = 0; i < count; ++i) {
    const RobotRuntime& r = robots_[i];
    bool finite = all_finite(r.x) && all_finite(r.x_m) && all_finite(r.estimator.xhat) &&
                  all_finite(r.theta().flat());
    if (r.rls) finite = finite && all_finite(r.rls->P);
    if (!finite) {
      throw NumericError("run aborted at step " + std::to_string(t_) + ": robot " +
                         std::to_string(i) + " state is not finite");
    }
  }

  if (scenario_.run.record_trace) {
    for (auto& row : last_rows_) trace_.rows.push_back(row);
  }
  ++t_;
  ++trace_.steps;
  trace_.wall_clock_s +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void Simulation::run_to_end() {
  while (t_ < scenario_.run.steps) step();
}

SimTrace Simulation::take_trace() {
  SimTrace out = std::move(trace_);
  trace_ = SimTrace{};
  trace_.robots = out.robots;
  trace_.n = out.n;
  trace_.m = out.m;
  trace_.robot_radius = out.robot_radius;
  return out;
}

RunResult run_scenario(const RobotScenario& scenario) {
  Simulation sim(scenario);
  sim.run_to_end();
  RunResult out;
  out.trace = sim.take_trace();
  out.metrics = compute_metrics(out.trace, scenario.run.convergence_tolerance);
  return out;
}

std::optional<long> settling_step(const std::vector<double>& series, double tolerance) {
  long s = static_cast<long>(series.size());
  while (s > 0 && series[s - 1] < tolerance) --s;
  if (s == static_cast<long>(series.size())) return std::nullopt;
  return s;
}

MetricsSummary compute_metrics(const SimTrace& trace, double tolerance) {
  require(trace.steps > 0 && !trace.rows.empty(), "compute_metrics: trace is empty");
  require(trace.rows.size() == static_cast<std::size_t>(trace.steps) * trace.robots,
          "compute_metrics: trace rows do not cover steps x robots");
  MetricsSummary out;
  out.tolerance = tolerance;
  out.wall_clock_s = trace.wall_clock_s;
  const long tail_start = trace.steps - std::max(1L, (trace.steps + 9) / 10);

  for (int i = 0; i < trace.robots; ++i) {
    RobotMetrics rm;
    rm.input_min = std::numeric_limits<double>::infinity();
    rm.input_max = -std::numeric_limits<double>::infinity();
    std::vector<double> err(trace.steps);
    for (long t = 0; t < trace.steps; ++t) {
      const TraceRow& row = trace.at(t, i);
      err[t] = inf_norm(row.e);
      if (t >= tail_start) rm.max_abs_error_tail = std::max(rm.max_abs_error_tail, err[t]);
      rm.input_min = std::min(rm.input_min, row.u.minCoeff());
      rm.input_max = std::max(rm.input_max, row.u.maxCoeff());
      if (row.suspended) ++rm.suspended_steps;
    }
    rm.convergence_step = settling_step(err, tolerance);
    rm.final_eps_norm = trace.at(trace.steps - 1, i).eps_norm;
    out.robots.push_back(rm);
  }

  out.min_surface_distance = kNaN;
  for (long t = 0; t < trace.steps; ++t) {
    const double d = trace.at(t, 0).min_surface_distance;
    if (std::isnan(d)) continue;
    if (std::isnan(out.min_surface_distance) || d < out.min_surface_distance) {
      out.min_surface_distance = d;
    }
  }
  out.collision = !std::isnan(out.min_surface_distance) && out.min_surface_distance < 0.0;
  return out;
}

std::vector<double> metric_series(const SimTrace& trace, const std::string& metric) {
  if (metric != "tracking_error" && metric != "estimation_error" &&
      metric != "min_surface_distance") {
    throw ContractError("unknown metric '" + metric +
                        "' (expected tracking_error, estimation_error or min_surface_distance)");
  }
  std::vector<double> out(trace.steps, 0.0);
  for (long t = 0; t < trace.steps; ++t) {
    if (metric == "min_surface_distance") {
      out[t] = trace.at(t, 0).min_surface_distance;
      continue;
    }
    for (int i = 0; i < trace.robots; ++i) {
      const TraceRow& row = trace.at(t, i);
      out[t] = std::max(out[t], metric == "tracking_error" ? inf_norm(row.e) : row.eps_norm);
    }
  }
  return out;
}

ComparisonReport compare_traces(const SimTrace& a, const SimTrace& b, const std::string& metric,
                                double tolerance) {
  require(a.steps == b.steps, "compare: horizons differ (" + std::to_string(a.steps) + " vs " +
                                  std::to_string(b.steps) + " steps)");
  require(a.robots == b.robots, "compare: robot counts differ");
  require(a.steps > 0, "compare: empty traces");
  ComparisonReport out;
  out.metric = metric;
  out.series_a = metric_series(a, metric);
  out.series_b = metric_series(b, metric);
  out.final_a = out.series_a.back();
  out.final_b = out.series_b.back();
  out.final_delta = out.final_a - out.final_b;
  for (std::size_t k = 0; k < out.series_a.size(); ++k) {
    const double d = std::abs(out.series_a[k] - out.series_b[k]);
    if (!std::isnan(d)) out.max_abs_delta = std::max(out.max_abs_delta, d);
  }
  out.settle_a = settling_step(out.series_a, tolerance);
  out.settle_b = settling_step(out.series_b, tolerance);
  return out;
}

ComparisonResult compare_runs(const RobotScenario& a, const RobotScenario& b,
                              const std::string& metric) {
  require(a.run.steps == b.run.steps, "compare: horizons differ (" +
                                          std::to_string(a.run.steps) + " vs " +
                                          std::to_string(b.run.steps) + " steps)");
  require(a.robots.size() == b.robots.size(), "compare: robot counts differ");
  metric_series(SimTrace{}, metric);  // rejects unknown names before running
  ComparisonResult out;
  out.a = run_scenario(a);
  out.b = run_scenario(b);
  out.report = compare_traces(out.a.trace, out.b.trace, metric, a.run.convergence_tolerance);
  return out;
}

}  // namespace lsmrac
