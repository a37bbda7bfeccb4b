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

// CSV traces (one row per step and robot, 9 significant digits) and JSON
// metric documents.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lsmrac/sim_engine.hpp"

namespace lsmrac {

std::vector<std::string> trace_header(const SimTrace& trace);

void write_trace_csv(const SimTrace& trace, std::ostream& out);
void emit_trace(const SimTrace& trace, const std::string& path);

/// Parses a CSV written by write_trace_csv. Values come back rounded to the
/// 9 significant digits they were written with.
SimTrace read_trace_csv(std::istream& in);
SimTrace load_trace(const std::string& path);

std::string metrics_to_json(const MetricsSummary& summary);
void emit_metrics(const MetricsSummary& summary, const std::string& path);

std::string comparison_to_json(const ComparisonReport& report, const std::string& label_a,
                               const std::string& label_b);
void emit_comparison(const ComparisonReport& report, const std::string& label_a,
                     const std::string& label_b, const std::string& path);

}  // namespace lsmrac
