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

#include <algorithm>
#include <cmath>
#include <complex>

#include "Eigen/Eigenvalues"
#include "gtest/gtest.h"
#include "test_support.hpp"

namespace lsmrac {
namespace {

Matrix LiteralAm() {
  const Matrix I = Matrix::Identity(2, 2);
  Matrix a(4, 4);
  a << 0.9999 * I, 0.9997 * I, -0.0028 * I, 0.775 * I;
  return a;
}

Matrix LiteralBm() {
  const Matrix I = Matrix::Identity(2, 2);
  Matrix b(4, 2);
  b << -0.0007 * I, -0.0278 * I;
  return b;
}

TEST(PlantStepTest, ZeroDynamics) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  EXPECT_EQ(plant_step(p, Vector::Zero(4), Vector::Zero(2)), Vector::Zero(4));
}

TEST(PlantStepTest, RobotVelocityCouplesIntoPosition) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  Vector x(4);
  x << 0, 0, 1, 0;
  const Vector next = plant_step(p, x, Vector::Zero(2));
  // 1 - 0.5 * 4 * 0.05^2 / 18
  EXPECT_NEAR(next(0), 1.0 - 0.5 * 4.0 * 0.0025 / 18.0, 1e-15);
  EXPECT_NEAR(next(0), 0.999722, 1e-6);
}

TEST(PlantStepTest, IdentityPlantAddsInput) {
  const LtiPlant p = make_plant(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  Vector x(2), u(2);
  x << 1, 2;
  u << 3, 4;
  const Vector next = plant_step(p, x, u);
  EXPECT_DOUBLE_EQ(next(0), 4.0);
  EXPECT_DOUBLE_EQ(next(1), 6.0);
}

TEST(PlantStepTest, DimensionMismatchIsContractError) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  EXPECT_THROW(plant_step(p, Vector::Zero(3), Vector::Zero(2)), ContractError);
  EXPECT_THROW(plant_step(p, Vector::Zero(4), Vector::Zero(1)), ContractError);
}

TEST(PlantTest, RejectsRankDeficientInputMap) {
  Matrix B = Matrix::Zero(3, 2);
  B(0, 0) = 1;
  B(1, 0) = 1;
  EXPECT_THROW(make_plant(Matrix::Identity(3, 3), B), ContractError);
  EXPECT_THROW(make_plant(Matrix::Identity(3, 3), Matrix::Zero(2, 1)), ContractError);
}

TEST(PlantStepTest, LinearInStateAndInput) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.integer(1, 6);
    const int m = rng.integer(1, n);
    const LtiPlant p = make_plant(rng.matrix(n, n), rng.matrix(n, m) + Matrix::Identity(n, m));
    const Vector x1 = rng.vector(n), x2 = rng.vector(n);
    const Vector u1 = rng.vector(m), u2 = rng.vector(m);
    const Vector lhs = plant_step(p, x1 + x2, u1 + u2);
    const Vector rhs = plant_step(p, x1, u1) + plant_step(p, x2, u2) -
                       plant_step(p, Vector::Zero(n), Vector::Zero(m));
    EXPECT_LT(max_abs(lhs - rhs), 1e-12);
  }
}

TEST(RobotPlantTest, LiteralEntries) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  ASSERT_EQ(p.n(), 4);
  ASSERT_EQ(p.m(), 2);
  EXPECT_NEAR(p.A(0, 2), 0.9997222222, 1e-10);
  EXPECT_NEAR(p.A(2, 2), 0.9888888889, 1e-10);
  EXPECT_NEAR(p.B(0, 0), 6.9444444e-5, 1e-12);
  EXPECT_NEAR(p.B(2, 0), 2.7777778e-3, 1e-10);
  EXPECT_EQ(p.A(1, 3), p.A(0, 2));
  EXPECT_EQ(p.B(1, 1), p.B(0, 0));
}

TEST(RobotPlantTest, FrictionlessVelocityIsIntegrator) {
  const LtiPlant p = build_robot_plant(18, 0, 0.05);
  EXPECT_EQ(p.A(2, 2), 1.0);
  EXPECT_EQ(p.A(3, 3), 1.0);
}

TEST(RobotPlantTest, LowerLeftBlockIsZeroForAnyStep) {
  for (double dt : {1e-4, 0.01, 0.05, 0.5, 3.0}) {
    const LtiPlant p = build_robot_plant(7.5, 2.0, dt);
    EXPECT_EQ(max_abs(p.A.block(2, 0, 2, 2)), 0.0) << "dt=" << dt;
  }
}

TEST(RobotPlantTest, RejectsNonPhysicalParameters) {
  EXPECT_THROW(build_robot_plant(0, 4, 0.05), ContractError);
  EXPECT_THROW(build_robot_plant(18, 4, 0), ContractError);
  EXPECT_THROW(build_robot_plant(-1, 4, 0.05), ContractError);
  EXPECT_THROW(build_robot_plant(18, -4, 0.05), ContractError);
}

TEST(ReferenceStepTest, ZeroStateZeroInput) {
  ReferenceModel model{LiteralAm(), LiteralBm(), InputGenerator::zero(2)};
  EXPECT_EQ(reference_step(model, Vector::Zero(4), 0), Vector::Zero(4));
}

TEST(ReferenceStepTest, LiteralInputMap) {
  Vector one(2);
  one << 1, 1;
  ReferenceModel model{LiteralAm(), LiteralBm(), InputGenerator::constant(one)};
  const Vector next = reference_step(model, Vector::Zero(4), 5);
  EXPECT_NEAR(next(0), -0.0007, 1e-15);
  EXPECT_NEAR(next(1), -0.0007, 1e-15);
  EXPECT_NEAR(next(2), -0.0278, 1e-15);
  EXPECT_NEAR(next(3), -0.0278, 1e-15);
}

TEST(ReferenceStepTest, LiteralEigenvalues) {
  Eigen::EigenSolver<Matrix> es(LiteralAm());
  std::vector<double> re;
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(es.eigenvalues()(k).imag(), 0.0, 1e-12);
    re.push_back(es.eigenvalues()(k).real());
  }
  std::sort(re.begin(), re.end());
  // The literal entries carry four digits, which moves the poles by ~1e-4.
  EXPECT_NEAR(re[0], 0.7881, 2e-4);
  EXPECT_NEAR(re[1], 0.7881, 2e-4);
  EXPECT_NEAR(re[2], 0.9868, 2e-4);
  EXPECT_NEAR(re[3], 0.9868, 2e-4);
  EXPECT_LT(spectral_radius(LiteralAm()), 1.0);
}

TEST(ReferenceStepTest, BoundedByGeometricSeries) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(1, 5);
    const int m = rng.integer(1, 3);
    const Matrix A_m = rng.stable(n, rng.uniform(0.3, 0.97));
    const Matrix B_m = rng.matrix(n, m);
    const auto input = InputGenerator::sinusoid(rng.vector(m), rng.vector(m), rng.uniform(0, 0.1));
    ReferenceModel model{A_m, B_m, input};
    Vector x = rng.vector(n);
    const double bound =
        reference_state_bound(A_m, B_m, x.cwiseAbs().maxCoeff(), input.sup_norm_bound());
    double worst = 0.0;
    for (long t = 0; t < 10'000; ++t) {
      worst = std::max(worst, x.cwiseAbs().maxCoeff());
      x = reference_step(model, x, t);
    }
    EXPECT_LE(worst, bound * (1 + 1e-12)) << "trial " << trial;
  }
}

TEST(InputGeneratorTest, SinusoidMatchesClosedForm) {
  Vector s(2), c(2);
  s << -0.2, 0.0;
  c << 0.0, 0.2;
  const double w = M_PI / 2000.0;
  const auto g = InputGenerator::sinusoid(s, c, w);
  for (long t : {0L, 1L, 1000L, 3999L}) {
    const Vector r = g.at(t);
    EXPECT_NEAR(r(0), -0.2 * std::sin(w * t), 1e-15);
    EXPECT_NEAR(r(1), 0.2 * std::cos(w * t), 1e-15);
  }
  EXPECT_NEAR(g.sup_norm_bound(), 0.2, 1e-15);
  EXPECT_EQ(InputGenerator::zero(3).at(17), Vector::Zero(3));
}

TEST(BuildReferenceTest, IdentityMatching) {
  testing::Rng rng(3);
  const LtiPlant p = make_plant(rng.matrix(3, 3), rng.matrix(3, 2));
  const auto ref = build_reference_from_gains(p, Matrix::Zero(3, 2), Vector::Ones(2));
  EXPECT_EQ(ref.A_m, p.A);
  EXPECT_EQ(ref.B_m, p.B);
  EXPECT_EQ(ref.params.Theta1_star, Matrix::Zero(3, 2));
  EXPECT_EQ(ref.params.theta2_star, Vector::Ones(2));
}

TEST(BuildReferenceTest, RobotPolePlacementIsStableAndExact) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  const Matrix K1 = robot_gains_for_poles(18, 4, 0.05, 0.9868, 0.7881);
  const auto ref = build_reference_from_gains(p, K1, Vector::Constant(2, -10.0));
  EXPECT_NEAR(spectral_radius(ref.A_m), 0.9868, 1e-12);

  Eigen::EigenSolver<Matrix> es(ref.A_m);
  for (int k = 0; k < 4; ++k) {
    const double ev = es.eigenvalues()(k).real();
    EXPECT_LT(std::min(std::abs(ev - 0.9868), std::abs(ev - 0.7881)), 1e-9);
  }
  const auto res = verify_matching(p, ref.A_m, ref.B_m, ref.params);
  EXPECT_LT(res.worst(), 1e-12);
  // The input gain reproduces the literal B_m to its four digits.
  EXPECT_LT(max_abs(ref.B_m - LiteralBm()), 5e-5);
  EXPECT_NEAR(ref.params.theta2_star(0), -0.1, 1e-15);
}

TEST(BuildReferenceTest, RejectsSingularK2) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  Vector k2(2);
  k2 << -10, 0;
  EXPECT_THROW(build_reference_from_gains(p, Matrix::Zero(4, 2), k2), ContractError);
}

TEST(BuildReferenceTest, RandomGainsAlwaysMatch) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(1, 6);
    const int m = rng.integer(1, n);
    const LtiPlant p = make_plant(rng.matrix(n, n), rng.matrix(n, m) + Matrix::Identity(n, m));
    Vector k2(m);
    for (int j = 0; j < m; ++j) k2(j) = rng.uniform(0.2, 3.0) * (j % 2 ? -1.0 : 1.0);
    const auto ref = build_reference_from_gains(p, rng.matrix(n, m), k2);
    EXPECT_LT(verify_matching(p, ref.A_m, ref.B_m, ref.params).worst(), 1e-12);
  }
}

TEST(VerifyMatchingTest, LiteralValuesDoNotMatchRobotPlant) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  const Matrix I = Matrix::Identity(2, 2);
  Matrix theta1(4, 2);
  theta1 << 0.1 * I, 0.1 * I;
  const auto params = matching_from_theta(theta1, Vector::Constant(2, -0.01), Vector::Constant(2, 1000));
  const auto res = verify_matching(p, LiteralAm(), LiteralBm(), params);
  EXPECT_GT(res.a_residual, 1e-3);
  EXPECT_GT(res.b_residual, 1e-3);
  // Direct substitution: B - B_m Theta2* at (2, 0) = dt/m - 0.0278 * 0.01.
  EXPECT_NEAR(res.b_residual, std::abs(0.05 / 18.0 - 0.000278), 1e-12);
}

TEST(VerifyMatchingTest, ResidualGrowsLinearlyWithPerturbation) {
  testing::Rng rng(8);
  const auto sys = testing::random_matched_system(rng, 4, 2);
  const Matrix delta = rng.matrix(4, 2, 1e-3);
  MatchingParameters perturbed = sys.reference.params;
  perturbed.Theta1_star += delta;
  const auto res = verify_matching(sys.plant, sys.reference.A_m, sys.reference.B_m, perturbed);
  EXPECT_NEAR(res.a_residual, max_abs(sys.reference.B_m * delta.transpose()), 1e-12);
}

TEST(MatchGivenReferenceTest, RecoversGainsFromConsistentMatrices) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sys = testing::random_matched_system(rng, rng.integer(2, 5), 2);
    const auto back = match_given_reference(sys.plant, sys.reference.A_m, sys.reference.B_m,
                                            Vector::Constant(2, 10.0), true);
    EXPECT_LT(max_abs(back.params.K1_star - sys.reference.params.K1_star), 1e-8);
    EXPECT_LT(max_abs(back.params.k2_star - sys.reference.params.k2_star), 1e-10);
  }
}

TEST(MatchGivenReferenceTest, StrictModeRejectsLiteralMatrices) {
  const LtiPlant p = build_robot_plant(18, 4, 0.05);
  EXPECT_THROW(match_given_reference(p, LiteralAm(), LiteralBm(), Vector(), true),
               ContractError);
  const auto loose = match_given_reference(p, LiteralAm(), LiteralBm(), Vector(), false);
  EXPECT_GT(verify_matching(p, LiteralAm(), LiteralBm(), loose.params).worst(), 1e-9);
}

}  // namespace
}  // namespace lsmrac
