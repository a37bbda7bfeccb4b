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

#include "lsmrac/scenario_config.hpp"

#include <cmath>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_support.hpp"

namespace lsmrac {
namespace {

using nlohmann::json;

json PresetJson() { return json::parse(scenario_to_json(make_preset("paper-3robot-ls"))); }

std::string ErrorPath(const json& doc) {
  try {
    parse_config(doc.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(PresetTest, ThreeRobotScenarioValues) {
  const RobotScenario sc = make_preset("paper-3robot-ls");
  EXPECT_EQ(sc.adaptation.kappa, 1e-5);
  EXPECT_EQ(sc.adaptation.p0_scale, 1.0);
  EXPECT_EQ(sc.adaptation.theta0.kind, Theta0Rule::Kind::kScaledStar);
  EXPECT_EQ(sc.adaptation.theta0.scale, 0.625);
  EXPECT_EQ(sc.collision.beta, 0.9);
  EXPECT_EQ(sc.collision.eta, 4.5);
  EXPECT_EQ(sc.collision.rho0, 0.36);
  EXPECT_TRUE(sc.ca_enabled);
  ASSERT_EQ(sc.robots.size(), 3u);
  Vector x2(4), x3(4);
  x2 << 0, 1.52, 0, 0;
  x3 << 0.5, -1, 0, 0;
  EXPECT_EQ(sc.robots[0].initial_state, Vector::Zero(4));
  EXPECT_EQ(sc.robots[1].initial_state, x2);
  EXPECT_EQ(sc.robots[2].initial_state, x3);
  const auto plant = std::get<RobotPlantSpec>(sc.plant);
  EXPECT_EQ(plant.mass_kg, 18.0);
  EXPECT_EQ(plant.friction, 4.0);
  EXPECT_EQ(plant.dt_s, 0.05);

  // R1 = 0.2 (-sin, cos), R2 = 0.375 (sin, -cos), R3 = 0 at w = pi / 2000.
  const double w = std::acos(-1.0) / 2000.0;
  for (long t : {0L, 333L, 1000L, 2500L}) {
    Vector r1(2), r2(2);
    r1 << -0.2 * std::sin(w * t), 0.2 * std::cos(w * t);
    r2 << 0.375 * std::sin(w * t), -0.375 * std::cos(w * t);
    EXPECT_LT(max_abs(sc.robots[0].reference_input.at(t) - r1), 1e-12);
    EXPECT_LT(max_abs(sc.robots[1].reference_input.at(t) - r2), 1e-12);
    EXPECT_EQ(sc.robots[2].reference_input.at(t), Vector::Zero(2));
  }
}

TEST(PresetTest, NamesAndAliases) {
  const auto names = preset_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "paper-3robot-ls"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "paper-3robot-literal"), names.end());
  EXPECT_EQ(make_preset("paper-3robot"), make_preset("paper-3robot-ls"));
  EXPECT_THROW(make_preset("nope"), ContractError);
  for (const auto& n : names) EXPECT_NO_THROW(validate_scenario(make_preset(n))) << n;
}

TEST(PresetTest, LiteralMatricesReportResidual) {
  const auto rs = validate_scenario(make_preset("paper-3robot-literal"));
  EXPECT_GT(rs.matching_residual.a_residual, 0.1);
  EXPECT_FALSE(rs.warnings.empty());
  EXPECT_DOUBLE_EQ(rs.reference.params.theta2_star(0), -0.01);
}

TEST(ConfigTest, MinimalDocumentTakesDefaults) {
  const RobotScenario sc = parse_config(R"({
    "plant": {"kind": "robot"},
    "robots": [{"initial_state": [0, 0, 0, 0]}]
  })");
  EXPECT_EQ(sc.collision.gamma, 0.15);
  EXPECT_EQ(sc.collision.rho_min, 0.30);
  EXPECT_EQ(sc.collision.v_max, 1.5);
  EXPECT_EQ(sc.run.steps, 8000);
  EXPECT_EQ(sc.adaptation.algorithm, Algorithm::kLeastSquares);
  EXPECT_EQ(sc.robots[0].reference_input.kind, InputGenerator::Kind::kZero);
}

TEST(ConfigTest, SchemaErrorsCarryPaths) {
  json doc = PresetJson();
  doc["robots"] = json::array();
  EXPECT_EQ(ErrorPath(doc), "robots");

  doc = PresetJson();
  doc["collision_avoidance"]["beta"] = 1.2;
  EXPECT_EQ(ErrorPath(doc), "collision_avoidance.beta");

  doc = PresetJson();
  doc["adaptation"]["kapa"] = 1.0;
  EXPECT_EQ(ErrorPath(doc), "adaptation.kapa");

  doc = PresetJson();
  doc["robots"][1]["initial_state"] = "far";
  EXPECT_EQ(ErrorPath(doc), "robots[1].initial_state");

  doc = PresetJson();
  doc["run"]["execution"] = "gpu";
  EXPECT_EQ(ErrorPath(doc), "run.execution");

  doc = PresetJson();
  doc.erase("plant");
  EXPECT_EQ(ErrorPath(doc), "plant");

  doc = PresetJson();
  doc["robots"][0]["initial_state"] = {0, 0, 0};
  EXPECT_EQ(ErrorPath(doc).rfind("robots", 0), 0u);
}

TEST(ConfigTest, MalformedJsonIsReported) {
  EXPECT_THROW(parse_config("{\"plant\": "), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/scenario.json"), std::exception);
}

TEST(ConfigTest, RoundTripIsLossless) {
  for (const auto& name : preset_names()) {
    const RobotScenario sc = make_preset(name);
    EXPECT_EQ(parse_config(scenario_to_json(sc)), sc) << name;
  }
  testing::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 4);
    RobotScenario sc = testing::synthetic_scenario(rng, n, rng.integer(1, std::min(n, 3)), 77);
    sc.adaptation.algorithm = Algorithm::kGradient;
    sc.adaptation.gradient_gain = rng.uniform(0.1, 1.9);
    sc.adaptation.kappa = rng.uniform(1e-6, 1.0);
    sc.run.theta_stride = rng.integer(0, 5);
    sc.run.parallel = rng.uniform(0, 1) < 0.5;
    EXPECT_EQ(parse_config(scenario_to_json(sc)), sc) << "trial " << trial;
  }
}

TEST(ConfigTest, OverridesApply) {
  json doc = PresetJson();
  doc["adaptation"]["algorithm"] = "gradient";
  doc["collision_avoidance"]["enabled"] = false;
  doc["run"]["steps"] = 12;
  doc["adaptation"]["theta0"] = {{"rule", "explicit"}, {"values", std::vector<double>(10, -0.5)}};
  const RobotScenario sc = parse_config(doc.dump());
  EXPECT_EQ(sc.adaptation.algorithm, Algorithm::kGradient);
  EXPECT_FALSE(sc.ca_enabled);
  EXPECT_EQ(sc.run.steps, 12);
  EXPECT_EQ(sc.adaptation.theta0.kind, Theta0Rule::Kind::kExplicit);
  EXPECT_EQ(sc.adaptation.theta0.values.size(), 10);
}

}  // namespace
}  // namespace lsmrac
