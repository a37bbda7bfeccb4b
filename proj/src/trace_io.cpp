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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lsmrac {

namespace {

using json = nlohmann::json;

int theta_width(const SimTrace& trace) {
  for (const auto& row : trace.rows) {
    if (row.theta) return static_cast<int>(row.theta->size());
  }
  return 0;
}

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  line += ',';
  line += buf;
}

void put(std::string& line, const Vector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) put(line, v(k));
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "': " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_or_null(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw std::runtime_error("trace: malformed number '" + cell + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> trace_header(const SimTrace& trace) {
  std::vector<std::string> h = {"step", "robot"};
  auto block = [&h](const char* prefix, int count) {
    for (int k = 0; k < count; ++k) h.push_back(std::string(prefix) + std::to_string(k));
  };
  block("x_", trace.n);
  block("x_m_", trace.n);
  block("e_", trace.n);
  block("xhat_", trace.n);
  block("u_", trace.m);
  block("u_o_", trace.m);
  block("f_r_", trace.m);
  for (const char* s : {"alpha", "eps_norm", "eps_weighted", "suspended", "degenerate",
                        "lyapunov", "min_surface_distance"}) {
    h.emplace_back(s);
  }
  block("theta_", theta_width(trace));
  return h;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  const auto header = trace_header(trace);
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  const int tw = theta_width(trace);
  std::string line;
  for (const auto& row : trace.rows) {
    line = std::to_string(row.step) + ',' + std::to_string(row.robot);
    put(line, row.x);
    put(line, row.x_m);
    put(line, row.e);
    put(line, row.xhat);
    put(line, row.u);
    put(line, row.u_track);
    put(line, row.repulsive);
    put(line, row.alpha);
    put(line, row.eps_norm);
    put(line, row.eps_weighted);
    line += row.suspended ? ",1" : ",0";
    line += row.degenerate ? ",1" : ",0";
    put(line, row.lyapunov);
    put(line, row.min_surface_distance);
    if (row.theta) {
      put(line, *row.theta);
    } else {
      line.append(static_cast<std::size_t>(tw), ',');
    }
    out << line << '\n';
  }
}

void emit_trace(const SimTrace& trace, const std::string& path) {
  auto out = open_for_write(path);
  write_trace_csv(trace, out);
  finish(out, path);
}

SimTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: missing header");
  const auto header = split(line);
  SimTrace t;
  int tw = 0;
  for (const auto& h : header) {
    if (h.rfind("xhat_", 0) == 0) ++t.n;
    if (h.rfind("u_o_", 0) == 0) ++t.m;
    if (h.rfind("theta_", 0) == 0) ++tw;
  }
  const std::size_t expected = 2 + 4 * t.n + 3 * t.m + 7 + tw;
  if (header.size() != expected) throw std::runtime_error("trace: unexpected header layout");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != expected) throw std::runtime_error("trace: row has wrong column count");
    std::size_t c = 0;
    auto next = [&]() { return parse_double(cells[c++]); };
    auto vec = [&](int k) {
      Vector v(k);
      for (int q = 0; q < k; ++q) v(q) = next();
      return v;
    };
    TraceRow row;
    row.step = std::stol(cells[c++]);
    row.robot = std::stoi(cells[c++]);
    row.x = vec(t.n);
    row.x_m = vec(t.n);
    row.e = vec(t.n);
    row.xhat = vec(t.n);
    row.u = vec(t.m);
    row.u_track = vec(t.m);
    row.repulsive = vec(t.m);
    row.alpha = next();
    row.eps_norm = next();
    row.eps_weighted = next();
    row.suspended = next() != 0.0;
    row.degenerate = next() != 0.0;
    row.lyapunov = next();
    row.min_surface_distance = next();
    if (tw > 0 && !cells[c].empty()) row.theta = vec(tw);
    t.robots = std::max(t.robots, row.robot + 1);
    t.steps = std::max(t.steps, row.step + 1);
    t.rows.push_back(std::move(row));
  }
  return t;
}

SimTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "': " + std::strerror(errno));
  return read_trace_csv(in);
}

std::string metrics_to_json(const MetricsSummary& s) {
  json robots = json::array();
  for (const auto& r : s.robots) {
    robots.push_back({{"max_abs_error_tail", r.max_abs_error_tail},
                      {"convergence_step", optional_or_null(r.convergence_step)},
                      {"final_eps_norm", r.final_eps_norm},
                      {"input_min", r.input_min},
                      {"input_max", r.input_max},
                      {"suspended_steps", r.suspended_steps}});
  }
  json doc = {{"robots", robots},
              {"min_surface_distance", number_or_null(s.min_surface_distance)},
              {"collision", s.collision},
              {"convergence_tolerance", s.tolerance},
              {"wall_clock_s", s.wall_clock_s}};
  return doc.dump(2);
}

void emit_metrics(const MetricsSummary& summary, const std::string& path) {
  auto out = open_for_write(path);
  out << metrics_to_json(summary) << '\n';
  finish(out, path);
}

std::string comparison_to_json(const ComparisonReport& r, const std::string& label_a,
                               const std::string& label_b) {
  json doc = {{"metric", r.metric},
              {"arms", {label_a, label_b}},
              {"final", {number_or_null(r.final_a), number_or_null(r.final_b)}},
              {"final_delta", number_or_null(r.final_delta)},
              {"max_abs_delta", r.max_abs_delta},
              {"settle_step", {optional_or_null(r.settle_a), optional_or_null(r.settle_b)}}};
  return doc.dump(2);
}

void emit_comparison(const ComparisonReport& report, const std::string& label_a,
                     const std::string& label_b, const std::string& path) {
  auto out = open_for_write(path);
  out << comparison_to_json(report, label_a, label_b) << '\n';
  finish(out, path);
}

}  // namespace lsmrac
