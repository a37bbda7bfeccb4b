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

// Discrete-time LTI plant and reference model, and the matching condition
// that ties them together:
//
//   plant      x(t+1)   = A x(t) + B u(t)
//   reference  x_m(t+1) = A_m x_m(t) + B_m r(t)
//   matching   A + B K1*^T = A_m,  B K2* = B_m,  K2* diagonal
//
// The indirect parameterization used by the adaptive laws rewrites matching
// as A = A_m - B_m Theta1*^T, B = B_m Theta2* with Theta2* = K2*^-1 and
// Theta1* = K1* K2*^-T.

#pragma once

#include "lsmrac/linalg.hpp"

namespace lsmrac {

struct LtiPlant {
  Matrix A;
  Matrix B;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
};

/// Validates shapes and that B has full column rank.
LtiPlant make_plant(Matrix A, Matrix B);

Vector plant_step(const LtiPlant& plant, const Vector& x, const Vector& u);

/// Reference input r(t) = offset + s * sin(w t) + c * cos(w t), elementwise.
/// Zero and constant inputs are the degenerate cases.
struct InputGenerator {
  enum class Kind { kZero, kConstant, kSinusoid };

  Kind kind = Kind::kZero;
  Vector offset;
  Vector sin_amplitude;
  Vector cos_amplitude;
  double omega_per_step = 0.0;

  static InputGenerator zero(int m);
  static InputGenerator constant(Vector value);
  static InputGenerator sinusoid(Vector sin_amplitude, Vector cos_amplitude,
                                 double omega_per_step);

  int dim() const { return static_cast<int>(offset.size()); }
  Vector at(long step) const;
  /// Upper bound on ||r(t)||_inf over all t.
  double sup_norm_bound() const;

  bool operator==(const InputGenerator& other) const;
};

struct ReferenceModel {
  Matrix A_m;
  Matrix B_m;
  InputGenerator input;
};

Vector reference_step(const ReferenceModel& model, const Vector& x_m, long step);

struct MatchingParameters {
  Matrix K1_star;      // n x m
  Vector k2_star;      // diagonal of K2*
  Matrix Theta1_star;  // n x m
  Vector theta2_star;  // diagonal of Theta2*
  Vector signs;        // sign[k2*_j], +-1
  Vector k2_upper;     // k2^b_j >= |k2*_j|
};

struct MatchedReference {
  Matrix A_m;
  Matrix B_m;
  MatchingParameters params;
};

/// Max-abs-entry residuals of the two matching equations.
struct MatchingResidual {
  double a_residual = 0.0;  // |A - (A_m - B_m Theta1*^T)|_max
  double b_residual = 0.0;  // |B - B_m Theta2*|_max

  double worst() const { return a_residual > b_residual ? a_residual : b_residual; }
};

/// A_m = A + B K1*^T, B_m = B K2*. `k2_upper` defaults to |k2*| when empty.
MatchedReference build_reference_from_gains(const LtiPlant& plant, const Matrix& K1_star,
                                            const Vector& k2_star,
                                            const Vector& k2_upper = Vector());

/// Recovers matching gains when A_m, B_m are given directly. K2* is the
/// column-wise least-squares fit of B K2* = B_m restricted to a diagonal,
/// K1* the least-squares fit of B K1*^T = A_m - A. With `strict` set, a
/// residual above 1e-9 throws ContractError.
MatchedReference match_given_reference(const LtiPlant& plant, const Matrix& A_m,
                                       const Matrix& B_m, const Vector& k2_upper,
                                       bool strict);

MatchingResidual verify_matching(const LtiPlant& plant, const Matrix& A_m, const Matrix& B_m,
                                 const MatchingParameters& params);

/// Builds Theta1*, Theta2*, signs from K1*, K2*. Throws on a zero k2* entry.
MatchingParameters matching_from_gains(const Matrix& K1_star, const Vector& k2_star,
                                       const Vector& k2_upper);

/// Inverse of matching_from_gains for given Theta1*, Theta2* values.
MatchingParameters matching_from_theta(const Matrix& Theta1_star, const Vector& theta2_star,
                                       const Vector& k2_upper);

/// Point-mass robot with viscous friction, state [x, y, vx, vy], input the
/// planar traction force:
///   A = [[I, (1 - 0.5 b dt^2 / m) I], [0, (1 - b dt / m) I]]
///   B = [[0.5 dt^2 / m I], [dt / m I]]
/// The position row adds the velocity state directly, so velocity is in
/// metres per step.
LtiPlant build_robot_plant(double mass_kg, double friction, double dt_s);

/// State-feedback gain K1* = [kp I; kv I] placing the per-axis closed-loop
/// poles of A + B K1*^T at {p1, p2} for the robot plant above.
Matrix robot_gains_for_poles(double mass_kg, double friction, double dt_s, double p1, double p2);

/// Geometric bound on ||x_m(t)||_inf for all t given ||x_m(0)||_inf and a
/// bound on ||r||_inf. Requires spectral radius(A_m) < 1.
double reference_state_bound(const Matrix& A_m, const Matrix& B_m, double x0_norm,
                             double r_norm);

}  // namespace lsmrac
