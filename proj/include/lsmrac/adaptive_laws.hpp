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

// Parameter adaptation for the indirect state-tracking controller.
//
// The least-squares law minimizes
//
//   J(theta) = 1/2 sum_tau (1/kappa) |mu(tau) + Z(tau)^T theta|^2
//            + 1/2 (theta - theta0)^T P0^-1 (theta - theta0)
//
// recursively:
//
//   N(t)       = kappa I + Z^T P(t-1) Z
//   theta(t+1) = theta(t) - P(t-1) Z N^-1 eps(t)
//   P(t)       = P(t-1) - P(t-1) Z N^-1 Z^T P(t-1)
//
// batch_solve() evaluates the closed-form minimizer directly and is kept as
// an independent check of the recursion.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lsmrac/regressor_filters.hpp"

namespace lsmrac {

/// Keeps each theta_2j on the known side of zero: sign_j * theta_2j >= 1/k2^b_j.
struct ProjectionBounds {
  Vector signs;
  Vector k2_upper;
};

/// Clamps every theta_2j that violates its bound to sign_j / k2^b_j. The
/// Theta1 part is never touched.
ThetaVector project_theta2(ThetaVector theta, const ProjectionBounds& bounds);

bool satisfies_projection(const ThetaVector& theta, const ProjectionBounds& bounds);

struct RegressorDatum {
  Matrix Z;
  Vector mu;
};

struct RlsState {
  ThetaVector theta;
  Matrix P;
  double kappa = 1.0;
  std::optional<ProjectionBounds> projection;
  bool history_enabled = false;
  std::vector<RegressorDatum> history;

  /// Validates kappa > 0 and P0 symmetric positive definite.
  static RlsState make(ThetaVector theta0, Matrix P0, double kappa,
                       std::optional<ProjectionBounds> projection = std::nullopt);
};

struct RlsStepInfo {
  double eps_weighted = 0.0;  // eps^T N^-1 eps
  bool projected = false;
};

/// One least-squares update in place. P is re-symmetrized afterwards and
/// projection (if configured) is applied to theta only.
RlsStepInfo rls_update(RlsState& state, const RegressorSnapshot& snapshot);

/// Closed-form minimizer of J over `history`:
///   theta = (P0^-1 + sum Z Z^T / kappa)^-1 (P0^-1 theta0 - sum Z mu / kappa)
Vector batch_solve(std::span<const RegressorDatum> history, const Matrix& P0,
                   const Vector& theta0, double kappa);

/// dJ/dtheta at `theta`; zero at the minimizer.
Vector cost_gradient(std::span<const RegressorDatum> history, const Matrix& P0,
                     const Vector& theta0, double kappa, const Vector& theta);

/// Normalized gradient law (comparison baseline):
///   theta_j <- theta_j - Gamma_j (sum_k eps_k zeta_kj) / m^2
///   m^2 = 1 + sum_ij (zeta_ij^T zeta_ij + xi_ij^2)
struct GradientState {
  ThetaVector theta;
  std::vector<Matrix> gains;  // Gamma_j, (n+1) x (n+1), spectrum in (0, 2)
  std::optional<ProjectionBounds> projection;

  static GradientState make(ThetaVector theta0, std::vector<Matrix> gains,
                            std::optional<ProjectionBounds> projection = std::nullopt);
  static GradientState with_scalar_gain(ThetaVector theta0, double gamma,
                                        std::optional<ProjectionBounds> projection = std::nullopt);
};

struct GradientStepInfo {
  double normalizer_sq = 1.0;
  bool projected = false;
};

GradientStepInfo gradient_update(GradientState& state, const RegressorSnapshot& snapshot);

struct EstimatorState {
  Vector xhat;
};

/// xhat(t+1) = A_m xhat + B_m (Theta2 u - Theta1^T x), with the applied u.
EstimatorState estimator_step(const EstimatorState& est, const ThetaVector& theta,
                              const Vector& x, const Vector& u, const Matrix& A_m,
                              const Matrix& B_m);

/// Certainty-equivalence input u = Theta2^-1 (Theta1^T x + r).
Vector control_law(const ThetaVector& theta, const Vector& x, const Vector& r);

/// V = theta_tilde^T P^-1 theta_tilde, evaluated with a Cholesky solve.
double lyapunov_monitor(const ThetaVector& theta, const Vector& theta_star, const Matrix& P);

}  // namespace lsmrac
