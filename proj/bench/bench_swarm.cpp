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

#include <cmath>

#include "benchmark/benchmark.h"
#include "lsmrac/scenario_config.hpp"
#include "lsmrac/sim_engine.hpp"

namespace {

using lsmrac::RobotScenario;

// N robots on a square grid with 1 m spacing, each tracking its own slow
// circle. Collision avoidance stays on so the pairwise force pass is timed.
RobotScenario Swarm(int robots, bool parallel) {
  RobotScenario sc = lsmrac::make_preset("paper-3robot-ls");
  const auto proto = sc.robots[0];
  sc.robots.clear();
  const int side = static_cast<int>(std::ceil(std::sqrt(robots)));
  for (int k = 0; k < robots; ++k) {
    auto r = proto;
    r.initial_state = lsmrac::Vector::Zero(4);
    r.initial_state(0) = k % side;
    r.initial_state(1) = k / side;
    sc.robots.push_back(r);
  }
  sc.run.steps = 400;
  sc.run.record_trace = false;
  sc.run.parallel = parallel;
  return sc;
}

void BM_Swarm(benchmark::State& state, bool parallel) {
  const RobotScenario sc = Swarm(static_cast<int>(state.range(0)), parallel);
  for (auto _ : state) {
    lsmrac::Simulation sim(sc);
    sim.run_to_end();
    benchmark::DoNotOptimize(sim.robot(0).x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * sc.run.steps);
}

BENCHMARK_CAPTURE(BM_Swarm, serial, false)
    ->RangeMultiplier(4)
    ->Range(4, 256)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Swarm, openmp, true)
    ->RangeMultiplier(4)
    ->Range(4, 256)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
