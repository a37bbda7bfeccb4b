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

#include "lsmrac/adaptive_laws.hpp"

#include <cmath>
#include <string>

#include "Eigen/Eigenvalues"

namespace lsmrac {

namespace {

void check_bounds(const ProjectionBounds& bounds, int m) {
  require(bounds.signs.size() == m && bounds.k2_upper.size() == m,
          "projection: bounds must have m entries");
  for (int j = 0; j < m; ++j) {
    require(bounds.signs(j) == 1.0 || bounds.signs(j) == -1.0,
            "projection: signs must be +1 or -1");
    require(bounds.k2_upper(j) > 0.0, "projection: k2 upper bounds must be positive");
  }
}

}  // namespace

ThetaVector project_theta2(ThetaVector theta, const ProjectionBounds& bounds) {
  check_bounds(bounds, theta.m());
  for (int j = 0; j < theta.m(); ++j) {
    const double floor = 1.0 / bounds.k2_upper(j);
    if (bounds.signs(j) * theta.theta2(j) < floor) {
      theta.theta2(j) = bounds.signs(j) * floor;
    }
  }
  return theta;
}

bool satisfies_projection(const ThetaVector& theta, const ProjectionBounds& bounds) {
  for (int j = 0; j < theta.m(); ++j) {
    if (bounds.signs(j) * theta.theta2(j) < 1.0 / bounds.k2_upper(j)) return false;
  }
  return true;
}

RlsState RlsState::make(ThetaVector theta0, Matrix P0, double kappa,
                        std::optional<ProjectionBounds> projection) {
  require(kappa > 0.0 && std::isfinite(kappa), "rls: kappa must be positive");
  require(P0.rows() == theta0.size() && P0.cols() == theta0.size(),
          "rls: P0 must be m(n+1) square");
  require(max_abs(P0 - P0.transpose()) == 0.0, "rls: P0 must be symmetric");
  require(Eigen::LLT<Matrix>(P0).info() == Eigen::Success, "rls: P0 must be positive definite");
  if (projection) check_bounds(*projection, theta0.m());
  RlsState s;
  s.theta = std::move(theta0);
  s.P = std::move(P0);
  s.kappa = kappa;
  s.projection = std::move(projection);
  return s;
}

RlsStepInfo rls_update(RlsState& state, const RegressorSnapshot& snapshot) {
  const Matrix& Z = snapshot.Z;
  require(Z.rows() == state.theta.size(), "rls_update: Z has wrong row count");
  require(snapshot.epsilon.size() == Z.cols(), "rls_update: eps has wrong dimension");

  if (state.history_enabled) state.history.push_back({Z, snapshot.mu});

  const Matrix PZ = state.P * Z;
  Matrix N = Z.transpose() * PZ;
  N.diagonal().array() += state.kappa;
  N = 0.5 * (N + N.transpose());
  Eigen::LLT<Matrix> llt(N);
  if (llt.info() != Eigen::Success) {
    throw NumericError("rls_update: N = kappa I + Z^T P Z is not positive definite");
  }
  const Vector n_inv_eps = llt.solve(snapshot.epsilon);
  const Matrix n_inv_zp = llt.solve(PZ.transpose());

  RlsStepInfo info;
  info.eps_weighted = snapshot.epsilon.dot(n_inv_eps);
  state.theta.flat() -= PZ * n_inv_eps;
  state.P -= PZ * n_inv_zp;
  state.P = 0.5 * (state.P + state.P.transpose()).eval();

  if (state.projection && !satisfies_projection(state.theta, *state.projection)) {
    state.theta = project_theta2(std::move(state.theta), *state.projection);
    info.projected = true;
  }
  return info;
}

Vector batch_solve(std::span<const RegressorDatum> history, const Matrix& P0,
                   const Vector& theta0, double kappa) {
  require(kappa > 0.0, "batch_solve: kappa must be positive");
  Eigen::LLT<Matrix> p0(P0);
  require(p0.info() == Eigen::Success, "batch_solve: P0 must be positive definite");
  const Matrix p0_inv = p0.solve(Matrix::Identity(P0.rows(), P0.cols()));
  Matrix information = p0_inv;
  Vector rhs = p0_inv * theta0;
  for (const auto& d : history) {
    information.noalias() += d.Z * d.Z.transpose() / kappa;
    rhs.noalias() -= d.Z * d.mu / kappa;
  }
  return spd_solve(0.5 * (information + information.transpose()), rhs);
}

Vector cost_gradient(std::span<const RegressorDatum> history, const Matrix& P0,
                     const Vector& theta0, double kappa, const Vector& theta) {
  Vector grad = P0.llt().solve(theta - theta0);
  for (const auto& d : history) {
    grad.noalias() += d.Z * (d.mu + d.Z.transpose() * theta) / kappa;
  }
  return grad;
}

GradientState GradientState::make(ThetaVector theta0, std::vector<Matrix> gains,
                                  std::optional<ProjectionBounds> projection) {
  require(static_cast<int>(gains.size()) == theta0.m(), "gradient: need one gain per channel");
  for (const auto& g : gains) {
    require(g.rows() == theta0.n() + 1 && g.cols() == theta0.n() + 1,
            "gradient: gains must be (n+1) x (n+1)");
    require(max_abs(g - g.transpose()) == 0.0, "gradient: gains must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() > 0.0 && es.eigenvalues().maxCoeff() < 2.0,
            "gradient: gain eigenvalues must lie in (0, 2)");
  }
  if (projection) check_bounds(*projection, theta0.m());
  GradientState s;
  s.theta = std::move(theta0);
  s.gains = std::move(gains);
  s.projection = std::move(projection);
  return s;
}

GradientState GradientState::with_scalar_gain(ThetaVector theta0, double gamma,
                                              std::optional<ProjectionBounds> projection) {
  const int n1 = theta0.n() + 1;
  std::vector<Matrix> gains(theta0.m(), gamma * Matrix::Identity(n1, n1));
  return make(std::move(theta0), std::move(gains), std::move(projection));
}

GradientStepInfo gradient_update(GradientState& state, const RegressorSnapshot& snapshot) {
  require(snapshot.Z.rows() == state.theta.size(), "gradient_update: Z has wrong row count");
  GradientStepInfo info;
  info.normalizer_sq = 1.0 + snapshot.zeta_norm_sq + snapshot.xi_norm_sq;
  // Row block j of Z eps is sum_k eps_k zeta_kj.
  const Vector direction = snapshot.Z * snapshot.epsilon;
  const int n1 = state.theta.n() + 1;
  for (int j = 0; j < state.theta.m(); ++j) {
    state.theta.column(j) -=
        state.gains[j] * direction.segment(static_cast<Eigen::Index>(j) * n1, n1) /
        info.normalizer_sq;
  }
  if (state.projection && !satisfies_projection(state.theta, *state.projection)) {
    state.theta = project_theta2(std::move(state.theta), *state.projection);
    info.projected = true;
  }
  return info;
}

EstimatorState estimator_step(const EstimatorState& est, const ThetaVector& theta,
                              const Vector& x, const Vector& u, const Matrix& A_m,
                              const Matrix& B_m) {
  require(est.xhat.size() == A_m.rows() && x.size() == A_m.rows(),
          "estimator_step: state has wrong dimension");
  require(u.size() == B_m.cols(), "estimator_step: input has wrong dimension");
  const Vector drive = theta.theta2().cwiseProduct(u) - theta.theta1().transpose() * x;
  return EstimatorState{A_m * est.xhat + B_m * drive};
}

Vector control_law(const ThetaVector& theta, const Vector& x, const Vector& r) {
  require(x.size() == theta.n(), "control_law: state has wrong dimension");
  require(r.size() == theta.m(), "control_law: reference has wrong dimension");
  Vector u = theta.theta1().transpose() * x + r;
  for (int j = 0; j < theta.m(); ++j) {
    const double t2 = theta.theta2(j);
    if (t2 == 0.0) {
      throw ContractError("control_law: theta2_" + std::to_string(j) +
                          " is zero; projection must keep it away from 0");
    }
    u(j) /= t2;
  }
  return u;
}

double lyapunov_monitor(const ThetaVector& theta, const Vector& theta_star, const Matrix& P) {
  require(theta_star.size() == theta.size(), "lyapunov_monitor: theta* has wrong dimension");
  const Vector tilde = theta.flat() - theta_star;
  return tilde.dot(spd_solve(P, tilde).col(0));
}

}  // namespace lsmrac
