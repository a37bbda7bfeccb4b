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

#include "lsmrac/system_models.hpp"

#include <cmath>
#include <string>

namespace lsmrac {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Induced infinity norm (max row sum).
double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

LtiPlant make_plant(Matrix A, Matrix B) {
  require(A.rows() == A.cols() && A.rows() > 0, "plant: A must be square, got " + shape(A));
  require(B.rows() == A.rows() && B.cols() > 0,
          "plant: B must have n rows, got " + shape(B) + " for n=" + std::to_string(A.rows()));
  Eigen::ColPivHouseholderQR<Matrix> qr(B);
  require(qr.rank() == B.cols(), "plant: B must have full column rank");
  return LtiPlant{std::move(A), std::move(B)};
}

Vector plant_step(const LtiPlant& plant, const Vector& x, const Vector& u) {
  require(x.size() == plant.n(), "plant_step: state has wrong dimension");
  require(u.size() == plant.m(), "plant_step: input has wrong dimension");
  return plant.A * x + plant.B * u;
}

InputGenerator InputGenerator::zero(int m) {
  InputGenerator g;
  g.kind = Kind::kZero;
  g.offset = Vector::Zero(m);
  g.sin_amplitude = Vector::Zero(m);
  g.cos_amplitude = Vector::Zero(m);
  return g;
}

InputGenerator InputGenerator::constant(Vector value) {
  InputGenerator g = zero(static_cast<int>(value.size()));
  g.kind = Kind::kConstant;
  g.offset = std::move(value);
  return g;
}

InputGenerator InputGenerator::sinusoid(Vector sin_amplitude, Vector cos_amplitude,
                                        double omega_per_step) {
  require(sin_amplitude.size() == cos_amplitude.size(),
          "sinusoid: sin and cos amplitudes differ in length");
  InputGenerator g = zero(static_cast<int>(sin_amplitude.size()));
  g.kind = Kind::kSinusoid;
  g.sin_amplitude = std::move(sin_amplitude);
  g.cos_amplitude = std::move(cos_amplitude);
  g.omega_per_step = omega_per_step;
  return g;
}

Vector InputGenerator::at(long step) const {
  switch (kind) {
    case Kind::kZero:
      return Vector::Zero(dim());
    case Kind::kConstant:
      return offset;
    case Kind::kSinusoid: {
      const double phase = omega_per_step * static_cast<double>(step);
      return offset + sin_amplitude * std::sin(phase) + cos_amplitude * std::cos(phase);
    }
  }
  return Vector::Zero(dim());
}

double InputGenerator::sup_norm_bound() const {
  return (offset.cwiseAbs() + sin_amplitude.cwiseAbs() + cos_amplitude.cwiseAbs())
      .maxCoeff();
}

bool InputGenerator::operator==(const InputGenerator& other) const {
  return kind == other.kind && offset == other.offset &&
         sin_amplitude == other.sin_amplitude && cos_amplitude == other.cos_amplitude &&
         omega_per_step == other.omega_per_step;
}

Vector reference_step(const ReferenceModel& model, const Vector& x_m, long step) {
  require(x_m.size() == model.A_m.rows(), "reference_step: state has wrong dimension");
  require(model.input.dim() == model.B_m.cols(), "reference_step: input has wrong dimension");
  return model.A_m * x_m + model.B_m * model.input.at(step);
}

MatchingParameters matching_from_gains(const Matrix& K1_star, const Vector& k2_star,
                                       const Vector& k2_upper) {
  const auto m = k2_star.size();
  require(K1_star.cols() == m, "matching: K1* must be n x m");
  require(k2_upper.size() == m, "matching: k2 upper bounds must have m entries");
  MatchingParameters p;
  p.K1_star = K1_star;
  p.k2_star = k2_star;
  p.theta2_star.resize(m);
  p.signs.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    require(k2_star(j) != 0.0 && std::isfinite(k2_star(j)), "matching: K2* is singular");
    require(k2_upper(j) >= std::abs(k2_star(j)),
            "matching: k2 upper bound " + std::to_string(j) + " is below |k2*|");
    p.theta2_star(j) = 1.0 / k2_star(j);
    p.signs(j) = k2_star(j) > 0.0 ? 1.0 : -1.0;
  }
  // K2* diagonal => (K2*^-1)^T = diag(theta2*)
  p.Theta1_star = K1_star * p.theta2_star.asDiagonal();
  p.k2_upper = k2_upper;
  return p;
}

MatchingParameters matching_from_theta(const Matrix& Theta1_star, const Vector& theta2_star,
                                       const Vector& k2_upper) {
  const auto m = theta2_star.size();
  require(Theta1_star.cols() == m, "matching: Theta1* must be n x m");
  require(k2_upper.size() == m, "matching: k2 upper bounds must have m entries");
  MatchingParameters p;
  p.Theta1_star = Theta1_star;
  p.theta2_star = theta2_star;
  p.k2_star.resize(m);
  p.signs.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    require(theta2_star(j) != 0.0 && std::isfinite(theta2_star(j)),
            "matching: Theta2* is singular");
    p.k2_star(j) = 1.0 / theta2_star(j);
    p.signs(j) = theta2_star(j) > 0.0 ? 1.0 : -1.0;
  }
  p.K1_star = Theta1_star * p.k2_star.asDiagonal();
  p.k2_upper = k2_upper;
  return p;
}

MatchedReference build_reference_from_gains(const LtiPlant& plant, const Matrix& K1_star,
                                            const Vector& k2_star, const Vector& k2_upper) {
  require(K1_star.rows() == plant.n() && K1_star.cols() == plant.m(),
          "build_reference_from_gains: K1* must be " + std::to_string(plant.n()) + "x" +
              std::to_string(plant.m()));
  require(k2_star.size() == plant.m(), "build_reference_from_gains: K2* must have m entries");
  const Vector upper = k2_upper.size() == 0 ? Vector(k2_star.cwiseAbs()) : k2_upper;
  MatchedReference out;
  out.params = matching_from_gains(K1_star, k2_star, upper);
  out.A_m = plant.A + plant.B * K1_star.transpose();
  out.B_m = plant.B * k2_star.asDiagonal();
  return out;
}

MatchedReference match_given_reference(const LtiPlant& plant, const Matrix& A_m,
                                       const Matrix& B_m, const Vector& k2_upper,
                                       bool strict) {
  require(A_m.rows() == plant.n() && A_m.cols() == plant.n(), "reference: A_m must be n x n");
  require(B_m.rows() == plant.n() && B_m.cols() == plant.m(), "reference: B_m must be n x m");
  const int m = plant.m();
  Vector k2(m);
  for (int j = 0; j < m; ++j) {
    const auto b = plant.B.col(j);
    k2(j) = b.dot(B_m.col(j)) / b.squaredNorm();
  }
  const Matrix K1_t = plant.B.colPivHouseholderQr().solve(A_m - plant.A);
  MatchedReference out;
  out.A_m = A_m;
  out.B_m = B_m;
  out.params = matching_from_gains(K1_t.transpose(), k2,
                                   k2_upper.size() == 0 ? Vector(k2.cwiseAbs()) : k2_upper);
  if (strict) {
    const auto residual = verify_matching(plant, A_m, B_m, out.params);
    if (residual.worst() > 1e-9) {
      throw ContractError("reference: matching residual " + std::to_string(residual.worst()) +
                          " exceeds 1e-9 in strict mode");
    }
  }
  return out;
}

MatchingResidual verify_matching(const LtiPlant& plant, const Matrix& A_m, const Matrix& B_m,
                                 const MatchingParameters& params) {
  MatchingResidual r;
  r.a_residual = max_abs(plant.A - (A_m - B_m * params.Theta1_star.transpose()));
  r.b_residual = max_abs(plant.B - B_m * params.theta2_star.asDiagonal());
  return r;
}

LtiPlant build_robot_plant(double mass_kg, double friction, double dt_s) {
  require(mass_kg > 0.0, "robot plant: mass must be positive");
  require(dt_s > 0.0, "robot plant: dt must be positive");
  require(friction >= 0.0, "robot plant: friction must be nonnegative");
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Matrix A = Matrix::Zero(4, 4);
  A.block<2, 2>(0, 0) = I;
  A.block<2, 2>(0, 2) = (1.0 - 0.5 * friction * dt_s * dt_s / mass_kg) * I;
  A.block<2, 2>(2, 2) = (1.0 - friction * dt_s / mass_kg) * I;
  Matrix B = Matrix::Zero(4, 2);
  B.block<2, 2>(0, 0) = (0.5 * dt_s * dt_s / mass_kg) * I;
  B.block<2, 2>(2, 0) = (dt_s / mass_kg) * I;
  return make_plant(std::move(A), std::move(B));
}

Matrix robot_gains_for_poles(double mass_kg, double friction, double dt_s, double p1,
                             double p2) {
  const LtiPlant plant = build_robot_plant(mass_kg, friction, dt_s);
  const double b1 = plant.B(0, 0);
  const double b2 = plant.B(2, 0);
  const double a12 = plant.A(0, 2);
  const double a22 = plant.A(2, 2);
  // Per axis the closed loop is [[1 + b1 kp, a12 + b1 kv], [b2 kp, a22 + b2 kv]].
  // Its trace is linear in (kp, kv) and the kp*kv terms cancel in the
  // determinant, so matching trace and determinant is a 2x2 linear solve.
  const double trace = p1 + p2;
  const double det = p1 * p2;
  const double denom = b1 * (1.0 - a22) + a12 * b2;
  require(denom != 0.0, "robot_gains_for_poles: plant is not controllable");
  const double kp = (trace - 1.0 - det) / denom;
  const double kv = (trace - 1.0 - a22 - b1 * kp) / b2;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Matrix K1 = Matrix::Zero(4, 2);
  K1.block<2, 2>(0, 0) = kp * I;
  K1.block<2, 2>(2, 0) = kv * I;
  return K1;
}

double reference_state_bound(const Matrix& A_m, const Matrix& B_m, double x0_norm,
                             double r_norm) {
  require(spectral_radius(A_m) < 1.0, "reference_state_bound: A_m is not Schur stable");
  Matrix power = Matrix::Identity(A_m.rows(), A_m.cols());
  double sup_power = 0.0;
  double input_gain = 0.0;
  for (int k = 0; k < 10'000'000; ++k) {
    const double pk = inf_norm(power);
    sup_power = std::max(sup_power, pk);
    input_gain += inf_norm(power * B_m);
    if (pk < 1e-17 * std::max(1.0, sup_power)) break;
    power = A_m * power;
  }
  return sup_power * x0_norm + input_gain * r_norm;
}

}  // namespace lsmrac
