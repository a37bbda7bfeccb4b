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

#include "lsmrac/collision_avoidance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lsmrac {

void RepulsiveConfig::validate() const {
  require(gamma > 0.0, "collision_avoidance.gamma_m must be positive");
  require(gamma < rho_min, "collision_avoidance: need gamma_m < rho_min_m");
  require(rho_min < rho0, "collision_avoidance: need rho_min_m < rho0_m");
  require(beta >= 0.0 && beta < 1.0, "collision_avoidance.beta must lie in [0, 1)");
  require(eta > 0.0, "collision_avoidance.eta must be positive");
  require(v_max > 0.0, "collision_avoidance.v_max_mps must be positive");
  require(mass > 0.0, "collision_avoidance.mass_kg must be positive");
}

std::optional<std::string> energy_feasibility_warning(const RepulsiveConfig& cfg) {
  const double needed = field_value(cfg.rho0, cfg) + 0.5 * cfg.mass * cfg.v_max * cfg.v_max;
  const double available = field_value(cfg.rho_min, cfg);
  if (available >= needed) return std::nullopt;
  return "repulsive field stores " + std::to_string(available) + " J at rho_min but a " +
         "full-speed approach carries " + std::to_string(needed) +
         " J; separation relies on alpha blending";
}

PairGeometry pair_geometry(const Vec2& pos_i, const Vec2& pos_j) {
  PairGeometry g;
  const Vec2 d = pos_i - pos_j;
  g.rho = d.norm();
  if (g.rho > 0.0) {
    g.unit = d / g.rho;
  } else {
    g.degenerate = true;
  }
  return g;
}

double field_value(double rho, const RepulsiveConfig& cfg) {
  if (rho > cfg.rho0) return 0.0;
  const double r = std::max(rho, cfg.gamma);
  const double k = 1.0 / r - 1.0 / cfg.rho0;
  return 0.5 * cfg.eta * k * k;
}

double force_magnitude(double rho, const RepulsiveConfig& cfg) {
  if (rho > cfg.rho0) return 0.0;
  const double r = std::max(rho, cfg.gamma);
  return cfg.eta * (1.0 / r - 1.0 / cfg.rho0) / (r * r);
}

Vec2 pair_force(const PairGeometry& geom, const RepulsiveConfig& cfg) {
  const double mag = force_magnitude(geom.rho, cfg);
  if (mag == 0.0) return Vec2::Zero();
  if (geom.degenerate) return Vec2(mag, 0.0);
  return mag * geom.unit;
}

ResultantForce resultant_force(std::span<const Vec2> positions, int self,
                               const RepulsiveConfig& cfg) {
  require(self >= 0 && self < static_cast<int>(positions.size()),
          "resultant_force: robot index out of range");
  ResultantForce out;
  for (int j = 0; j < static_cast<int>(positions.size()); ++j) {
    if (j == self) continue;
    const auto g = pair_geometry(positions[self], positions[j]);
    const Vec2 f = pair_force(g, cfg);
    out.force += f;
    out.degenerate = out.degenerate || (g.degenerate && f.squaredNorm() > 0.0);
  }
  return out;
}

double energy_budget(double rho_ij, const RepulsiveConfig& cfg) {
  return std::max(field_value(cfg.rho_min, cfg) - field_value(rho_ij, cfg), 0.0);
}

std::optional<double> intrusion_energy(const Vec2& u_track, const Vec2& f_pair,
                                       const RepulsiveConfig& cfg, double dt) {
  const double norm = f_pair.norm();
  if (norm == 0.0) return std::nullopt;
  return -(u_track.dot(f_pair) / norm) * cfg.v_max * dt;
}

double alpha_coefficient(const Vec2& u_track, std::span<const Vec2> pair_forces,
                         std::span<const double> budgets, const RepulsiveConfig& cfg,
                         double dt) {
  require(pair_forces.size() == budgets.size(), "alpha_coefficient: forces/budgets mismatch");
  double alpha = 1.0;
  for (std::size_t k = 0; k < pair_forces.size(); ++k) {
    const auto e = intrusion_energy(u_track, pair_forces[k], cfg, dt);
    if (!e || *e <= 0.0) continue;
    alpha = std::min(alpha, std::min(cfg.beta * budgets[k] / *e, 1.0));
  }
  return std::clamp(alpha, 0.0, 1.0);
}

Vec2 modified_input(const Vec2& u_track, const Vec2& repulsive, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "modified_input: alpha must lie in [0, 1]");
  return repulsive + alpha * u_track;
}

BlendedInput blend_tracking_input(std::span<const Vec2> positions, int self,
                                  const Vec2& u_track, const RepulsiveConfig& cfg, double dt) {
  require(self >= 0 && self < static_cast<int>(positions.size()),
          "blend_tracking_input: robot index out of range");
  BlendedInput out;
  // Only neighbours inside rho0 contribute a force or constrain alpha.
  std::vector<Vec2> forces;
  std::vector<double> budgets;
  for (int j = 0; j < static_cast<int>(positions.size()); ++j) {
    if (j == self) continue;
    const auto g = pair_geometry(positions[self], positions[j]);
    const Vec2 f = pair_force(g, cfg);
    if (f.squaredNorm() == 0.0) continue;
    out.repulsive += f;
    out.degenerate = out.degenerate || g.degenerate;
    forces.push_back(f);
    budgets.push_back(energy_budget(g.rho, cfg));
  }
  out.alpha = alpha_coefficient(u_track, forces, budgets, cfg, dt);
  out.applied = modified_input(u_track, out.repulsive, out.alpha);
  return out;
}

}  // namespace lsmrac
