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

// JSON scenario documents and the built-in presets. The schema is described
// in README.md; every key carries its unit where one applies.

#pragma once

#include <string>
#include <vector>

#include "lsmrac/sim_engine.hpp"

namespace lsmrac {

/// Schema or invariant violation, tagged with the offending field path
/// (e.g. "collision_avoidance.beta").
class ConfigError : public ContractError {
 public:
  ConfigError(std::string path, const std::string& message)
      : ContractError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses and validates a scenario. Omitted optional fields take their
/// defaults; unknown keys are rejected.
RobotScenario parse_config(const std::string& json_text);
RobotScenario load_config(const std::string& path);

/// Full document with every field written out; parse_config inverts it.
std::string scenario_to_json(const RobotScenario& scenario);

/// Runs resolve_scenario and rethrows its failures as ConfigError.
ResolvedScenario validate_scenario(const RobotScenario& scenario);

std::vector<std::string> preset_names();
RobotScenario make_preset(const std::string& name);

}  // namespace lsmrac
