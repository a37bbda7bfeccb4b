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
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace lsmrac {

namespace {

using json = nlohmann::json;

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
}

const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required field");
  return j.at(key);
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

long as_long(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<long>();
}

Vector as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = as_double(v[k], path + "[" + std::to_string(k) + "]");
  }
  return out;
}

Matrix as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    throw ConfigError(path, "expected a non-empty array of rows");
  }
  const std::size_t cols = v[0].size();
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < v.size(); ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const Vector row = as_vector(v[r], rp);
    if (static_cast<std::size_t>(row.size()) != cols) throw ConfigError(rp, "ragged matrix row");
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

template <typename T, typename F>
void optional_field(const json& j, const std::string& path, const char* key, T& out, F convert) {
  if (j.contains(key)) out = convert(j.at(key), join(path, key));
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vector(m.row(r).transpose())));
  return a;
}

PlantSpec parse_plant(const json& j, const std::string& path) {
  const std::string kind = as_string(field(j, path, "kind"), join(path, "kind"));
  if (kind == "robot") {
    check_keys(j, path, {"kind", "mass_kg", "friction_Ns_per_m", "dt_s"});
    RobotPlantSpec p;
    optional_field(j, path, "mass_kg", p.mass_kg, as_double);
    optional_field(j, path, "friction_Ns_per_m", p.friction, as_double);
    optional_field(j, path, "dt_s", p.dt_s, as_double);
    if (!(p.mass_kg > 0.0)) throw ConfigError(join(path, "mass_kg"), "must be positive");
    if (!(p.dt_s > 0.0)) throw ConfigError(join(path, "dt_s"), "must be positive");
    if (p.friction < 0.0) throw ConfigError(join(path, "friction_Ns_per_m"), "must be >= 0");
    return p;
  }
  if (kind == "matrices") {
    check_keys(j, path, {"kind", "A", "B", "dt_s"});
    MatrixPlantSpec p;
    p.A = as_matrix(field(j, path, "A"), join(path, "A"));
    p.B = as_matrix(field(j, path, "B"), join(path, "B"));
    p.dt_s = as_double(field(j, path, "dt_s"), join(path, "dt_s"));
    if (!(p.dt_s > 0.0)) throw ConfigError(join(path, "dt_s"), "must be positive");
    return p;
  }
  throw ConfigError(join(path, "kind"), "expected \"robot\" or \"matrices\"");
}

ReferenceSpec parse_reference(const json& j, const std::string& path) {
  const std::string kind = as_string(field(j, path, "kind"), join(path, "kind"));
  if (kind == "poles") {
    check_keys(j, path, {"kind", "slow_pole", "fast_pole", "input_gain"});
    PoleReferenceSpec r;
    optional_field(j, path, "slow_pole", r.slow_pole, as_double);
    optional_field(j, path, "fast_pole", r.fast_pole, as_double);
    optional_field(j, path, "input_gain", r.input_gain, as_double);
    return r;
  }
  if (kind == "gains") {
    check_keys(j, path, {"kind", "K1", "K2_diag"});
    GainReferenceSpec r;
    r.K1 = as_matrix(field(j, path, "K1"), join(path, "K1"));
    r.k2 = as_vector(field(j, path, "K2_diag"), join(path, "K2_diag"));
    return r;
  }
  if (kind == "matrices") {
    check_keys(j, path, {"kind", "A_m", "B_m", "theta1_star", "theta2_star_diag", "strict"});
    MatrixReferenceSpec r;
    r.A_m = as_matrix(field(j, path, "A_m"), join(path, "A_m"));
    r.B_m = as_matrix(field(j, path, "B_m"), join(path, "B_m"));
    if (j.contains("theta1_star")) {
      r.theta1_star = as_matrix(j.at("theta1_star"), join(path, "theta1_star"));
    }
    if (j.contains("theta2_star_diag")) {
      r.theta2_star = as_vector(j.at("theta2_star_diag"), join(path, "theta2_star_diag"));
    }
    optional_field(j, path, "strict", r.strict, as_bool);
    return r;
  }
  throw ConfigError(join(path, "kind"), "expected \"poles\", \"gains\" or \"matrices\"");
}

InputGenerator parse_input(const json& j, const std::string& path, int m) {
  const std::string kind = as_string(field(j, path, "kind"), join(path, "kind"));
  if (kind == "zero") {
    check_keys(j, path, {"kind"});
    return InputGenerator::zero(m);
  }
  if (kind == "constant") {
    check_keys(j, path, {"kind", "value"});
    return InputGenerator::constant(as_vector(field(j, path, "value"), join(path, "value")));
  }
  if (kind == "sinusoid") {
    check_keys(j, path,
               {"kind", "offset", "sin_amplitude", "cos_amplitude", "omega_rad_per_step"});
    const Vector s = as_vector(field(j, path, "sin_amplitude"), join(path, "sin_amplitude"));
    const Vector c = as_vector(field(j, path, "cos_amplitude"), join(path, "cos_amplitude"));
    if (s.size() != c.size()) {
      throw ConfigError(join(path, "cos_amplitude"), "length differs from sin_amplitude");
    }
    InputGenerator g = InputGenerator::sinusoid(
        s, c, as_double(field(j, path, "omega_rad_per_step"), join(path, "omega_rad_per_step")));
    if (j.contains("offset")) {
      g.offset = as_vector(j.at("offset"), join(path, "offset"));
      if (g.offset.size() != s.size()) {
        throw ConfigError(join(path, "offset"), "length differs from sin_amplitude");
      }
    }
    return g;
  }
  throw ConfigError(join(path, "kind"), "expected \"zero\", \"constant\" or \"sinusoid\"");
}

RobotSpec parse_robot(const json& j, const std::string& path, int m) {
  check_keys(j, path,
             {"initial_state", "initial_reference_state", "initial_estimate", "reference_input"});
  RobotSpec r;
  r.initial_state = as_vector(field(j, path, "initial_state"), join(path, "initial_state"));
  if (j.contains("initial_reference_state")) {
    r.initial_reference_state =
        as_vector(j.at("initial_reference_state"), join(path, "initial_reference_state"));
  }
  if (j.contains("initial_estimate")) {
    r.initial_estimate = as_vector(j.at("initial_estimate"), join(path, "initial_estimate"));
  }
  r.reference_input = j.contains("reference_input")
                          ? parse_input(j.at("reference_input"), join(path, "reference_input"), m)
                          : InputGenerator::zero(m);
  return r;
}

AdaptationConfig parse_adaptation(const json& j, const std::string& path) {
  check_keys(j, path,
             {"algorithm", "kappa", "p0_scale", "theta0", "projection", "gradient_gain"});
  AdaptationConfig a;
  if (j.contains("algorithm")) {
    const std::string p = join(path, "algorithm");
    const std::string s = as_string(j.at("algorithm"), p);
    if (s != "ls" && s != "gradient") throw ConfigError(p, "expected \"ls\" or \"gradient\"");
    a.algorithm = algorithm_from_string(s);
  }
  optional_field(j, path, "kappa", a.kappa, as_double);
  optional_field(j, path, "p0_scale", a.p0_scale, as_double);
  optional_field(j, path, "gradient_gain", a.gradient_gain, as_double);
  if (!(a.kappa > 0.0)) throw ConfigError(join(path, "kappa"), "must be positive");
  if (!(a.p0_scale > 0.0)) throw ConfigError(join(path, "p0_scale"), "must be positive");
  if (!(a.gradient_gain > 0.0 && a.gradient_gain < 2.0)) {
    throw ConfigError(join(path, "gradient_gain"), "must lie in (0, 2)");
  }

  if (j.contains("theta0")) {
    const std::string tp = join(path, "theta0");
    const json& t = j.at("theta0");
    const std::string rule = as_string(field(t, tp, "rule"), join(tp, "rule"));
    if (rule == "scaled_star") {
      check_keys(t, tp, {"rule", "scale"});
      optional_field(t, tp, "scale", a.theta0.scale, as_double);
    } else if (rule == "explicit") {
      check_keys(t, tp, {"rule", "values"});
      a.theta0.kind = Theta0Rule::Kind::kExplicit;
      a.theta0.values = as_vector(field(t, tp, "values"), join(tp, "values"));
    } else {
      throw ConfigError(join(tp, "rule"), "expected \"scaled_star\" or \"explicit\"");
    }
  }

  if (j.contains("projection")) {
    const std::string pp = join(path, "projection");
    const json& p = j.at("projection");
    check_keys(p, pp, {"enabled", "signs", "k2_upper"});
    optional_field(p, pp, "enabled", a.projection.enabled, as_bool);
    if (p.contains("signs")) {
      const Vector s = as_vector(p.at("signs"), join(pp, "signs"));
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) != 1.0 && s(k) != -1.0) throw ConfigError(join(pp, "signs"), "entries must be +1 or -1");
      }
      a.projection.signs = s;
    }
    if (p.contains("k2_upper")) {
      const Vector k = as_vector(p.at("k2_upper"), join(pp, "k2_upper"));
      if (k.size() > 0 && !(k.minCoeff() > 0.0)) {
        throw ConfigError(join(pp, "k2_upper"), "entries must be positive");
      }
      a.projection.k2_upper = k;
    }
  }
  return a;
}

void parse_collision(const json& j, const std::string& path, RobotScenario& sc) {
  check_keys(j, path,
             {"enabled", "eta", "gamma_m", "rho0_m", "rho_min_m", "v_max_mps", "beta", "mass_kg"});
  RepulsiveConfig& c = sc.collision;
  optional_field(j, path, "enabled", sc.ca_enabled, as_bool);
  optional_field(j, path, "eta", c.eta, as_double);
  optional_field(j, path, "gamma_m", c.gamma, as_double);
  optional_field(j, path, "rho0_m", c.rho0, as_double);
  optional_field(j, path, "rho_min_m", c.rho_min, as_double);
  optional_field(j, path, "v_max_mps", c.v_max, as_double);
  optional_field(j, path, "beta", c.beta, as_double);
  optional_field(j, path, "mass_kg", c.mass, as_double);
  if (!(c.beta >= 0.0 && c.beta < 1.0)) throw ConfigError(join(path, "beta"), "must lie in [0, 1)");
  if (!(c.eta > 0.0)) throw ConfigError(join(path, "eta"), "must be positive");
  if (!(c.gamma > 0.0)) throw ConfigError(join(path, "gamma_m"), "must be positive");
  if (!(c.gamma < c.rho_min)) throw ConfigError(join(path, "rho_min_m"), "must exceed gamma_m");
  if (!(c.rho_min < c.rho0)) throw ConfigError(join(path, "rho0_m"), "must exceed rho_min_m");
  if (!(c.v_max > 0.0)) throw ConfigError(join(path, "v_max_mps"), "must be positive");
  if (!(c.mass > 0.0)) throw ConfigError(join(path, "mass_kg"), "must be positive");
}

void parse_run(const json& j, const std::string& path, RunOptions& r) {
  check_keys(j, path,
             {"steps", "theta_star_known", "convergence_tolerance", "theta_stride", "execution",
              "record_trace"});
  optional_field(j, path, "steps", r.steps, as_long);
  optional_field(j, path, "theta_star_known", r.theta_star_known, as_bool);
  optional_field(j, path, "convergence_tolerance", r.convergence_tolerance, as_double);
  optional_field(j, path, "record_trace", r.record_trace, as_bool);
  if (j.contains("theta_stride")) {
    r.theta_stride = static_cast<int>(as_long(j.at("theta_stride"), join(path, "theta_stride")));
  }
  if (j.contains("execution")) {
    const std::string p = join(path, "execution");
    const std::string e = as_string(j.at("execution"), p);
    if (e != "serial" && e != "parallel") throw ConfigError(p, "expected \"serial\" or \"parallel\"");
    r.parallel = e == "parallel";
  }
  if (r.steps < 1) throw ConfigError(join(path, "steps"), "must be at least 1");
  if (!(r.convergence_tolerance > 0.0)) {
    throw ConfigError(join(path, "convergence_tolerance"), "must be positive");
  }
  if (r.theta_stride < 0) throw ConfigError(join(path, "theta_stride"), "must be >= 0");
}

RobotScenario parse_document(const json& doc) {
  check_keys(doc, "",
             {"name", "plant", "reference", "robots", "adaptation", "collision_avoidance", "run"});
  RobotScenario sc;
  optional_field(doc, "", "name", sc.name, as_string);
  sc.plant = parse_plant(field(doc, "", "plant"), "plant");
  const int m = std::holds_alternative<RobotPlantSpec>(sc.plant)
                    ? 2
                    : static_cast<int>(std::get<MatrixPlantSpec>(sc.plant).B.cols());
  if (const auto* robot = std::get_if<RobotPlantSpec>(&sc.plant)) sc.collision.mass = robot->mass_kg;

  sc.reference = doc.contains("reference") ? parse_reference(doc.at("reference"), "reference")
                                           : ReferenceSpec{PoleReferenceSpec{}};
  const json& robots = field(doc, "", "robots");
  if (!robots.is_array()) throw ConfigError("robots", "expected an array");
  if (robots.empty()) throw ConfigError("robots", "at least one robot is required");
  for (std::size_t i = 0; i < robots.size(); ++i) {
    sc.robots.push_back(parse_robot(robots[i], "robots[" + std::to_string(i) + "]", m));
  }
  if (doc.contains("adaptation")) sc.adaptation = parse_adaptation(doc.at("adaptation"), "adaptation");
  if (doc.contains("collision_avoidance")) {
    parse_collision(doc.at("collision_avoidance"), "collision_avoidance", sc);
  }
  if (doc.contains("run")) parse_run(doc.at("run"), "run", sc.run);
  validate_scenario(sc);
  return sc;
}

json input_to_json(const InputGenerator& g) {
  switch (g.kind) {
    case InputGenerator::Kind::kZero:
      return {{"kind", "zero"}};
    case InputGenerator::Kind::kConstant:
      return {{"kind", "constant"}, {"value", to_json(g.offset)}};
    case InputGenerator::Kind::kSinusoid:
      return {{"kind", "sinusoid"},
              {"offset", to_json(g.offset)},
              {"sin_amplitude", to_json(g.sin_amplitude)},
              {"cos_amplitude", to_json(g.cos_amplitude)},
              {"omega_rad_per_step", g.omega_per_step}};
  }
  return {};
}

RobotScenario three_robot_base(const std::string& name) {
  RobotScenario sc;
  sc.name = name;
  const double w = std::numbers::pi / 2000.0;
  auto vec2 = [](double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
  };
  auto vec4 = [](double a, double b, double c, double d) {
    Vector v(4);
    v << a, b, c, d;
    return v;
  };
  sc.robots = {
      RobotSpec{vec4(0, 0, 0, 0), std::nullopt, std::nullopt,
                InputGenerator::sinusoid(vec2(-0.2, 0.0), vec2(0.0, 0.2), w)},
      RobotSpec{vec4(0, 1.52, 0, 0), std::nullopt, std::nullopt,
                InputGenerator::sinusoid(vec2(0.375, 0.0), vec2(0.0, -0.375), w)},
      RobotSpec{vec4(0.5, -1, 0, 0), std::nullopt, std::nullopt, InputGenerator::zero(2)},
  };
  sc.adaptation.kappa = 1e-5;
  sc.adaptation.p0_scale = 1.0;
  sc.adaptation.theta0 = Theta0Rule{};
  return sc;
}

}  // namespace

RobotScenario parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("parse error: ") + e.what());
  }
  return parse_document(doc);
}

RobotScenario load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string scenario_to_json(const RobotScenario& sc) {
  json doc;
  doc["name"] = sc.name;
  if (const auto* p = std::get_if<RobotPlantSpec>(&sc.plant)) {
    doc["plant"] = {{"kind", "robot"},
                    {"mass_kg", p->mass_kg},
                    {"friction_Ns_per_m", p->friction},
                    {"dt_s", p->dt_s}};
  } else {
    const auto& p2 = std::get<MatrixPlantSpec>(sc.plant);
    doc["plant"] = {{"kind", "matrices"}, {"A", to_json(p2.A)}, {"B", to_json(p2.B)},
                    {"dt_s", p2.dt_s}};
  }

  if (const auto* r = std::get_if<PoleReferenceSpec>(&sc.reference)) {
    doc["reference"] = {{"kind", "poles"},
                        {"slow_pole", r->slow_pole},
                        {"fast_pole", r->fast_pole},
                        {"input_gain", r->input_gain}};
  } else if (const auto* g = std::get_if<GainReferenceSpec>(&sc.reference)) {
    doc["reference"] = {{"kind", "gains"}, {"K1", to_json(g->K1)}, {"K2_diag", to_json(g->k2)}};
  } else {
    const auto& mr = std::get<MatrixReferenceSpec>(sc.reference);
    json r = {{"kind", "matrices"},
              {"A_m", to_json(mr.A_m)},
              {"B_m", to_json(mr.B_m)},
              {"strict", mr.strict}};
    if (mr.theta1_star) r["theta1_star"] = to_json(*mr.theta1_star);
    if (mr.theta2_star) r["theta2_star_diag"] = to_json(*mr.theta2_star);
    doc["reference"] = r;
  }

  json robots = json::array();
  for (const auto& rb : sc.robots) {
    json r = {{"initial_state", to_json(rb.initial_state)},
              {"reference_input", input_to_json(rb.reference_input)}};
    if (rb.initial_reference_state) {
      r["initial_reference_state"] = to_json(*rb.initial_reference_state);
    }
    if (rb.initial_estimate) r["initial_estimate"] = to_json(*rb.initial_estimate);
    robots.push_back(r);
  }
  doc["robots"] = robots;

  const AdaptationConfig& a = sc.adaptation;
  json ad = {{"algorithm", to_string(a.algorithm)},
             {"kappa", a.kappa},
             {"p0_scale", a.p0_scale},
             {"gradient_gain", a.gradient_gain}};
  if (a.theta0.kind == Theta0Rule::Kind::kScaledStar) {
    ad["theta0"] = {{"rule", "scaled_star"}, {"scale", a.theta0.scale}};
  } else {
    ad["theta0"] = {{"rule", "explicit"}, {"values", to_json(a.theta0.values)}};
  }
  json proj = {{"enabled", a.projection.enabled}};
  if (a.projection.signs) proj["signs"] = to_json(*a.projection.signs);
  if (a.projection.k2_upper) proj["k2_upper"] = to_json(*a.projection.k2_upper);
  ad["projection"] = proj;
  doc["adaptation"] = ad;

  const RepulsiveConfig& c = sc.collision;
  doc["collision_avoidance"] = {{"enabled", sc.ca_enabled}, {"eta", c.eta},
                                {"gamma_m", c.gamma},       {"rho0_m", c.rho0},
                                {"rho_min_m", c.rho_min},   {"v_max_mps", c.v_max},
                                {"beta", c.beta},           {"mass_kg", c.mass}};

  const RunOptions& r = sc.run;
  doc["run"] = {{"steps", r.steps},
                {"theta_star_known", r.theta_star_known},
                {"convergence_tolerance", r.convergence_tolerance},
                {"theta_stride", r.theta_stride},
                {"execution", r.parallel ? "parallel" : "serial"},
                {"record_trace", r.record_trace}};
  return doc.dump(2);
}

ResolvedScenario validate_scenario(const RobotScenario& scenario) {
  try {
    scenario.collision.validate();
    return resolve_scenario(scenario);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // Engine messages lead with the field path ("run.steps must ...").
    std::string msg = e.what();
    const auto cut = msg.find_first_of(" :");
    std::string path = msg.substr(0, cut);
    if (path.find_first_of(".[") == std::string::npos && path != "robots") path = "<scenario>";
    throw ConfigError(path, msg);
  }
}

std::vector<std::string> preset_names() {
  return {"paper-3robot-ls", "paper-3robot", "paper-3robot-literal"};
}

RobotScenario make_preset(const std::string& name) {
  if (name == "paper-3robot-ls" || name == "paper-3robot") {
    RobotScenario sc = three_robot_base("paper-3robot-ls");
    sc.reference = PoleReferenceSpec{};
    return sc;
  }
  if (name == "paper-3robot-literal") {
    RobotScenario sc = three_robot_base("paper-3robot-literal");
    const Matrix I = Matrix::Identity(2, 2);
    MatrixReferenceSpec ref;
    ref.A_m.resize(4, 4);
    ref.A_m << 0.9999 * I, 0.9997 * I, -0.0028 * I, 0.775 * I;
    ref.B_m.resize(4, 2);
    ref.B_m << -0.0007 * I, -0.0278 * I;
    Matrix theta1(4, 2);
    theta1 << 0.1 * I, 0.1 * I;
    ref.theta1_star = theta1;
    ref.theta2_star = Vector::Constant(2, -0.01);
    sc.reference = ref;
    return sc;
  }
  throw ContractError("unknown preset '" + name + "'");
}

}  // namespace lsmrac
