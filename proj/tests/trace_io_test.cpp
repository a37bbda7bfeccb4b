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

#include "lsmrac/trace_io.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "lsmrac/scenario_config.hpp"
#include "test_support.hpp"

namespace lsmrac {
namespace {

bool Close9(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= 5e-9 * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

bool Close9(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (!Close9(a(k), b(k))) return false;
  }
  return true;
}

int CountLines(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

TEST(TraceCsvTest, TwoStepRunHasHeaderAndTwoRows) {
  const auto r = run_scenario(testing::single_robot_scenario(2));
  std::ostringstream out;
  write_trace_csv(r.trace, out);
  EXPECT_EQ(CountLines(out.str()), 3);
  EXPECT_EQ(out.str().rfind("step,robot,x_0,x_1,x_2,x_3,x_m_0", 0), 0u);
}

TEST(TraceCsvTest, HeaderNamesEveryField) {
  RobotScenario sc = make_preset("paper-3robot-ls");
  sc.run.steps = 3;
  sc.run.theta_stride = 1;
  const auto h = trace_header(run_scenario(sc).trace);
  for (const char* name : {"xhat_3", "u_1", "u_o_0", "f_r_1", "alpha", "eps_norm", "suspended",
                           "lyapunov", "min_surface_distance", "theta_9"}) {
    EXPECT_NE(std::find(h.begin(), h.end(), name), h.end()) << name;
  }
  EXPECT_EQ(h.size(), 2u + 16 + 6 + 7 + 10);
}

TEST(TraceCsvTest, RoundTripKeepsNineDigits) {
  RobotScenario sc = make_preset("paper-3robot-ls");
  sc.run.steps = 60;
  sc.run.theta_stride = 4;
  sc.run.theta_star_known = true;
  const auto r = run_scenario(sc);
  std::stringstream buf;
  write_trace_csv(r.trace, buf);
  const SimTrace back = read_trace_csv(buf);
  ASSERT_EQ(back.rows.size(), r.trace.rows.size());
  EXPECT_EQ(back.robots, 3);
  EXPECT_EQ(back.steps, 60);
  for (std::size_t k = 0; k < back.rows.size(); ++k) {
    const TraceRow& p = r.trace.rows[k];
    const TraceRow& q = back.rows[k];
    ASSERT_TRUE(Close9(p.x, q.x) && Close9(p.x_m, q.x_m) && Close9(p.e, q.e) &&
                Close9(p.xhat, q.xhat) && Close9(p.u, q.u) && Close9(p.u_track, q.u_track) &&
                Close9(p.repulsive, q.repulsive) && Close9(p.alpha, q.alpha) &&
                Close9(p.eps_norm, q.eps_norm) && Close9(p.eps_weighted, q.eps_weighted) &&
                Close9(p.lyapunov, q.lyapunov) &&
                Close9(p.min_surface_distance, q.min_surface_distance))
        << "row " << k;
    EXPECT_EQ(p.suspended, q.suspended);
    ASSERT_EQ(p.theta.has_value(), q.theta.has_value()) << "row " << k;
    if (p.theta) {
      EXPECT_TRUE(Close9(*p.theta, *q.theta));
    }
  }
}

TEST(TraceCsvTest, RejectsMalformedInput) {
  std::istringstream empty("");
  EXPECT_THROW(read_trace_csv(empty), std::runtime_error);
  std::istringstream bad("step,robot,x_0\n0,0,1\n");
  EXPECT_THROW(read_trace_csv(bad), std::runtime_error);
  EXPECT_THROW(emit_trace(SimTrace{}, "/nonexistent/dir/trace.csv"), std::runtime_error);
}

TEST(MetricsJsonTest, FieldsAndNulls) {
  const auto r = run_scenario(testing::single_robot_scenario(30));
  const auto doc = nlohmann::json::parse(metrics_to_json(r.metrics));
  EXPECT_TRUE(doc["min_surface_distance"].is_null());
  EXPECT_EQ(doc["collision"], false);
  ASSERT_EQ(doc["robots"].size(), 1u);
  EXPECT_DOUBLE_EQ(doc["robots"][0]["input_min"].get<double>(), r.metrics.robots[0].input_min);
  EXPECT_TRUE(doc["robots"][0].contains("convergence_step"));
}

TEST(ComparisonJsonTest, Fields) {
  ComparisonReport rep;
  rep.metric = "tracking_error";
  rep.final_a = 0.1;
  rep.final_b = 0.3;
  rep.final_delta = -0.2;
  rep.max_abs_delta = 0.5;
  rep.settle_a = 10;
  const auto doc = nlohmann::json::parse(comparison_to_json(rep, "ls", "gradient"));
  EXPECT_EQ(doc["arms"][1], "gradient");
  EXPECT_EQ(doc["settle_step"][0], 10);
  EXPECT_TRUE(doc["settle_step"][1].is_null());
  EXPECT_DOUBLE_EQ(doc["final_delta"].get<double>(), -0.2);
}

}  // namespace
}  // namespace lsmrac
