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

// Repulsive potential fields between planar robots and the energy-budget
// blending of the tracking input:
//
//   U_i = F_ri + alpha_i U_oi,   F_ri = sum_{j != i} f_{i<-j}
//
// alpha_i limits the work the tracking input may do toward each neighbour
// to a fraction beta of the remaining budget W(rho_min) - W(rho_ij).

#pragma once

#include <optional>
#include <span>
#include <string>

#include "lsmrac/linalg.hpp"

namespace lsmrac {

struct RepulsiveConfig {
  double eta = 4.5;       // field strength (shared by all robots)
  double gamma = 0.15;    // robot radius, m
  double rho0 = 0.36;     // influence distance, m
  double rho_min = 0.30;  // minimum allowed centre distance, m
  double v_max = 1.5;     // speed cap used in the energy bound, m/s
  double beta = 0.9;      // budget fraction, [0, 1)
  double mass = 18.0;     // kg

  /// Throws ContractError unless 0 < gamma < rho_min < rho0, 0 <= beta < 1
  /// and eta, v_max, mass > 0.
  void validate() const;

  bool operator==(const RepulsiveConfig&) const = default;
};

/// Non-empty when W(rho_min) < W(rho0) + 0.5 mass v_max^2, i.e. the field
/// cannot absorb a full-speed approach on its own.
std::optional<std::string> energy_feasibility_warning(const RepulsiveConfig& cfg);

struct PairGeometry {
  double rho = 0.0;            // centre distance
  Vec2 unit = Vec2::Zero();    // from robot j toward robot i
  bool degenerate = false;     // coincident centres
};

PairGeometry pair_geometry(const Vec2& pos_i, const Vec2& pos_j);

double field_value(double rho, const RepulsiveConfig& cfg);

/// Magnitude of the field force at distance rho (plateau inside gamma).
double force_magnitude(double rho, const RepulsiveConfig& cfg);

/// Force on robot i from robot j's field. Coincident centres get the
/// plateau magnitude along +x.
Vec2 pair_force(const PairGeometry& geom, const RepulsiveConfig& cfg);

struct ResultantForce {
  Vec2 force = Vec2::Zero();
  bool degenerate = false;
};

ResultantForce resultant_force(std::span<const Vec2> positions, int self,
                               const RepulsiveConfig& cfg);

/// W(rho_min) - W(rho_ij), clamped at 0.
double energy_budget(double rho_ij, const RepulsiveConfig& cfg);

/// Worst-case work done toward robot j during one step by `u_track`:
/// -(u_track . f / |f|) v_max dt. Empty when the pair force is zero.
std::optional<double> intrusion_energy(const Vec2& u_track, const Vec2& f_pair,
                                       const RepulsiveConfig& cfg, double dt);

/// min over neighbours of min(beta dE / E, 1) for E > 0, else 1.
double alpha_coefficient(const Vec2& u_track, std::span<const Vec2> pair_forces,
                         std::span<const double> budgets, const RepulsiveConfig& cfg,
                         double dt);

Vec2 modified_input(const Vec2& u_track, const Vec2& repulsive, double alpha);

struct BlendedInput {
  Vec2 repulsive = Vec2::Zero();
  double alpha = 1.0;
  Vec2 applied = Vec2::Zero();
  bool degenerate = false;
};

/// Full evaluation for robot `self`: pair forces, budgets, alpha and U.
BlendedInput blend_tracking_input(std::span<const Vec2> positions, int self,
                                  const Vec2& u_track, const RepulsiveConfig& cfg, double dt);

}  // namespace lsmrac
