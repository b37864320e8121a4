// Copyright 2026 The spindet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spindet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  require_object(j, path);
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown field");
  }
}

void read(const json& j, const char* key, const std::string& path, double& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(join(path, key), "must be finite");
}

void read(const json& j, const char* key, const std::string& path, std::uint64_t& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(join(path, key), "expected a non-negative integer");
  out = v.get<std::uint64_t>();
}

void read(const json& j, const char* key, const std::string& path, int& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  out = v.get<int>();
}

void read(const json& j, const char* key, const std::string& path, std::string& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  out = v.get<std::string>();
}

void read(const json& j, const char* key, const std::string& path, std::vector<double>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  const auto p = join(path, key);
  if (!v.is_array()) throw ConfigError(p, "expected an array of numbers");
  out.clear();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(fmt::format("{}[{}]", p, i), "expected a number");
    out.push_back(v[i].get<double>());
  }
}

void read(const json& j, const char* key, const std::string& path, LevelLabel& out) {
  if (!j.contains(key)) return;
  std::vector<double> v;
  read(j, key, path, v);
  if (v.size() != 2) throw ConfigError(join(path, key), "expected [first, second] quantum numbers");
  out = {v[0], v[1]};
}

template <class E>
void read_enum(const json& j, const char* key, const std::string& path, E& out,
               const std::map<std::string, E>& names) {
  std::string text;
  if (!j.contains(key)) return;
  read(j, key, path, text);
  const auto it = names.find(text);
  if (it == names.end()) {
    std::string options;
    for (const auto& [name, value] : names) options += (options.empty() ? "" : ", ") + name;
    throw ConfigError(join(path, key), fmt::format("'{}' is not one of {}", text, options));
  }
  out = it->second;
}

template <class E>
std::string enum_name(E value, const std::map<std::string, E>& names) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "?";
}

const std::map<std::string, SpinSystem> kSystems{
    {"nv", SpinSystem::nv}, {"bi", SpinSystem::bi}, {"custom", SpinSystem::custom}};
const std::map<std::string, SmeScheme> kSchemes{{"kraus", SmeScheme::kraus},
                                                {"euler_maruyama", SmeScheme::euler_maruyama}};
const std::map<std::string, InitialState> kInitial{{"steady", InitialState::steady},
                                                   {"ground", InitialState::ground},
                                                   {"excited", InitialState::excited}};
const std::map<std::string, DrivePolicy> kDrive{{"saturating", DrivePolicy::saturating},
                                                {"explicit", DrivePolicy::explicit_beta}};
const std::map<std::string, DurationSpec::Unit> kUnits{{"tau1", DurationSpec::Unit::tau1},
                                                       {"s", DurationSpec::Unit::seconds}};

// ModelParams::validate names -> JSON keys.
const std::map<std::string, std::string> kModelKeys{
    {"g", "g_rad_per_s"},           {"kappa", "kappa_per_s"},
    {"kappa1", "kappa1_per_s"},     {"gamma_phi", "gamma_phi_per_s"},
    {"gamma_dec", "gamma_dec_per_s"}, {"delta", "delta_r_rad_per_s"},
    {"beta", "beta_re_sqrt_per_s"}, {"eta", "eta"},
    {"theta", "theta_rad"},         {"n_fock", "n_fock"}};
const std::map<std::string, std::string> kResonatorKeys{{"omega_r", "omega_r_rad_per_s"},
                                                        {"impedance", "impedance_ohm"},
                                                        {"kappa", "kappa_per_s"},
                                                        {"kappa1", "kappa1_per_s"}};
const std::map<std::string, std::string> kWireKeys{
    {"width", "width_m"},   {"thickness", "thickness_m"},
    {"length", "length_m"}, {"sheet_resistance", "sheet_resistance_ohm"},
    {"gap", "gap_J"},       {"temperature", "temperature_K"}};

template <class F>
void with_prefix(const std::string& prefix, const std::map<std::string, std::string>& keys, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    const auto it = keys.find(e.path());
    const std::string key = it == keys.end() ? e.path() : it->second;
    std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError(join(prefix, key), what);
  }
}

void read_model_fields(const json& j, const std::string& path, ModelParams& p) {
  read(j, "g_rad_per_s", path, p.g);
  read(j, "kappa_per_s", path, p.kappa);
  read(j, "kappa1_per_s", path, p.kappa1);
  read(j, "gamma_phi_per_s", path, p.gamma_phi);
  read(j, "gamma_dec_per_s", path, p.gamma_dec);
  read(j, "delta_r_rad_per_s", path, p.delta_r);
  read(j, "delta_s_rad_per_s", path, p.delta_s);
  double re = p.beta.real(), im = p.beta.imag();
  read(j, "beta_re_sqrt_per_s", path, re);
  read(j, "beta_im_sqrt_per_s", path, im);
  p.beta = {re, im};
  read(j, "theta_rad", path, p.theta);
  read(j, "n_fock", path, p.n_fock);
}

json model_fields(const ModelParams& p) {
  return json{{"g_rad_per_s", p.g},
              {"kappa_per_s", p.kappa},
              {"kappa1_per_s", p.kappa1},
              {"gamma_phi_per_s", p.gamma_phi},
              {"gamma_dec_per_s", p.gamma_dec},
              {"delta_r_rad_per_s", p.delta_r},
              {"delta_s_rad_per_s", p.delta_s},
              {"beta_re_sqrt_per_s", p.beta.real()},
              {"beta_im_sqrt_per_s", p.beta.imag()},
              {"theta_rad", p.theta},
              {"n_fock", p.n_fock}};
}

ModelParams table_model(double g, double kappa, double gamma_phi) {
  ModelParams p;
  p.g = g;
  p.kappa = kappa;
  p.kappa1 = kappa;
  p.gamma_phi = gamma_phi;
  return p;
}

}  // namespace

DurationSpec parse_duration(std::string_view text) {
  std::string s(text);
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  DurationSpec d;
  std::string number;
  if (s.size() > 4 && s.ends_with("tau1")) {
    d.unit = DurationSpec::Unit::tau1;
    number = s.substr(0, s.size() - 4);
  } else if (s.size() > 1 && s.ends_with("s")) {
    d.unit = DurationSpec::Unit::seconds;
    number = s.substr(0, s.size() - 1);
  } else {
    throw ConfigError("duration", fmt::format("'{}' needs a unit: tau1 or s", text));
  }
  const char* first = number.data();
  const char* last = first + number.size();
  const auto [ptr, ec] = std::from_chars(first, last, d.value);
  if (ec != std::errc() || ptr != last || !std::isfinite(d.value) || d.value < 0.0) {
    throw ConfigError("duration", fmt::format("'{}' is not a non-negative number", number));
  }
  return d;
}

std::vector<std::string> preset_names() { return {"nv", "bi", "sim"}; }

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  if (name == "nv") {
    c.spin.system = SpinSystem::nv;
    // 0.7 mT along the NV axis.
    c.spin.b0 = 0.7e-3 / std::cos(c.spin.nv.axis_angle);
    c.spin.lower = {0.0, 0.5};
    c.spin.upper = {-1.0, 0.5};
    c.device.resonator = {kTwoPi * 2.9e9, 15.3, 0.9e5, 0.9e5};
    c.model = table_model(kTwoPi * 6.5e3, 0.9e5, 1e5);
    c.eta_list = {1.0};
  } else if (name == "bi") {
    c.spin.system = SpinSystem::bi;
    c.spin.b0 = 3e-3;
    c.spin.lower = {4.0, 4.0};
    c.spin.upper = {5.0, 5.0};
    c.device.resonator = {kTwoPi * 7.3e9, 26.5, 2.3e5, 2.3e5};
    c.model = table_model(kTwoPi * 8e3, 2.3e5, 1e4);
    c.eta_list = {1.0};
  } else if (name == "sim") {
    c.spin.system = SpinSystem::custom;
    c.device.resonator = {kTwoPi * 7.3e9, 26.5, 4.6e5, 4.6e5};
    c.model = table_model(kTwoPi * 1e4, 4.6e5, 1e4);
    c.eta_list = {0.5};
  } else {
    throw ConfigError("preset", fmt::format("unknown preset '{}' (nv, bi, sim)", name));
  }
  c.model.eta = c.eta_list.front();
  return c;
}

ModelParams RunConfig::resolved_model(double eta) const {
  ModelParams p = model;
  p.eta = eta;
  if (drive == DrivePolicy::saturating) p.set_saturating_drive();
  return p;
}

void RunConfig::validate() const {
  if (schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", fmt::format("unsupported version {}", schema_version));
  }
  if (eta_list.empty()) throw ConfigError("eta", "needs at least one value");
  for (std::size_t i = 0; i < eta_list.size(); ++i) {
    if (!(eta_list[i] > 0.0 && eta_list[i] <= 1.0)) {
      throw ConfigError(fmt::format("eta[{}]", i), "must lie in (0, 1]");
    }
  }
  with_prefix("model", kModelKeys, [&] { resolved_model(eta_list.front()).validate(); });
  with_prefix("device.resonator", kResonatorKeys, [&] { device.resonator.validate(); });
  with_prefix("device.wire", kWireKeys, [&] { device.wire.validate(); });
  if (!(device.spin_distance > 0.0)) throw ConfigError("device.spin_distance_m", "must be positive");
  if (!(device.field_map_half_width > 0.0)) {
    throw ConfigError("device.field_map_half_width_m", "must be positive");
  }
  if (!(device.field_map_step > 0.0)) throw ConfigError("device.field_map_step_m", "must be positive");
  if (trials < 1) throw ConfigError("trials", "must be at least 1");
  if (!(duration.value >= 0.0)) throw ConfigError("duration.value", "must be non-negative");
  if (!(dt >= 0.0)) throw ConfigError("dt_s", "must be >= 0 (0 selects the stability bound)");
  for (std::size_t i = 0; i < snapshot_times_tau1.size(); ++i) {
    if (!(snapshot_times_tau1[i] > 0.0)) {
      throw ConfigError(fmt::format("snapshot_times_tau1[{}]", i), "must be positive");
    }
  }
  if (!(prior_spin > 0.0 && prior_spin < 1.0)) throw ConfigError("prior_spin", "must lie in (0, 1)");
  if (levels.field_max < levels.field_min) {
    throw ConfigError("levels.field_max_T", "must be >= levels.field_min_T");
  }
  if (levels.field_max > levels.field_min && !(levels.field_step > 0.0)) {
    throw ConfigError("levels.field_step_T", "must be positive");
  }
  if (spin.system == SpinSystem::bi && !(spin.bi.nuclear_spin > 0.0)) {
    throw ConfigError("spin.bi.nuclear_spin", "must be positive");
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

nlohmann::json model_params_to_json(const ModelParams& p) {
  auto j = model_fields(p);
  j["eta"] = p.eta;
  return j;
}

ModelParams model_params_from_json(const nlohmann::json& j, const std::string& path) {
  reject_unknown(j, path,
                 {"g_rad_per_s", "kappa_per_s", "kappa1_per_s", "gamma_phi_per_s", "gamma_dec_per_s",
                  "delta_r_rad_per_s", "delta_s_rad_per_s", "beta_re_sqrt_per_s",
                  "beta_im_sqrt_per_s", "theta_rad", "n_fock", "eta"});
  ModelParams p;
  read_model_fields(j, path, p);
  read(j, "eta", path, p.eta);
  with_prefix(path, kModelKeys, [&] { p.validate(); });
  return p;
}

RunConfig config_from_json(const nlohmann::json& j) {
  reject_unknown(j, "",
                 {"schema_version", "preset", "spin", "device", "model", "eta", "trials", "duration",
                  "dt_s", "seed", "snapshot_times_tau1", "sample_stride", "prior_spin", "scheme",
                  "initial_state", "levels", "output_dir"});
  if (!j.contains("schema_version")) throw ConfigError("schema_version", "required field missing");
  std::string preset = "sim";
  read(j, "preset", "", preset);
  RunConfig c = preset_config(preset);
  read(j, "schema_version", "", c.schema_version);
  if (c.schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", fmt::format("unsupported version {}", c.schema_version));
  }

  if (j.contains("spin")) {
    const auto& s = j.at("spin");
    reject_unknown(s, "spin", {"system", "b0_T", "lower", "upper", "nv", "bi"});
    read_enum(s, "system", "spin", c.spin.system, kSystems);
    read(s, "b0_T", "spin", c.spin.b0);
    read(s, "lower", "spin", c.spin.lower);
    read(s, "upper", "spin", c.spin.upper);
    if (s.contains("nv")) {
      const auto& n = s.at("nv");
      reject_unknown(n, "spin.nv",
                     {"zero_field_splitting_rad_per_s", "hyperfine_z_rad_per_s", "axis_angle_rad"});
      read(n, "zero_field_splitting_rad_per_s", "spin.nv", c.spin.nv.zero_field_splitting);
      read(n, "hyperfine_z_rad_per_s", "spin.nv", c.spin.nv.hyperfine_z);
      read(n, "axis_angle_rad", "spin.nv", c.spin.nv.axis_angle);
    }
    if (s.contains("bi")) {
      const auto& b = s.at("bi");
      reject_unknown(b, "spin.bi", {"hyperfine_rad_per_s", "nuclear_spin"});
      read(b, "hyperfine_rad_per_s", "spin.bi", c.spin.bi.hyperfine);
      read(b, "nuclear_spin", "spin.bi", c.spin.bi.nuclear_spin);
    }
  }

  if (j.contains("device")) {
    const auto& d = j.at("device");
    reject_unknown(d, "device",
                   {"resonator", "wire", "spin_distance_m", "field_map_half_width_m",
                    "field_map_step_m"});
    if (d.contains("resonator")) {
      const auto& r = d.at("resonator");
      const std::string p = "device.resonator";
      reject_unknown(r, p, {"omega_r_rad_per_s", "impedance_ohm", "kappa_per_s", "kappa1_per_s"});
      read(r, "omega_r_rad_per_s", p, c.device.resonator.omega_r);
      read(r, "impedance_ohm", p, c.device.resonator.impedance);
      read(r, "kappa_per_s", p, c.device.resonator.kappa);
      read(r, "kappa1_per_s", p, c.device.resonator.kappa1);
    }
    if (d.contains("wire")) {
      const auto& w = d.at("wire");
      const std::string p = "device.wire";
      reject_unknown(w, p,
                     {"width_m", "thickness_m", "length_m", "sheet_resistance_ohm", "gap_J",
                      "temperature_K"});
      read(w, "width_m", p, c.device.wire.width);
      read(w, "thickness_m", p, c.device.wire.thickness);
      read(w, "length_m", p, c.device.wire.length);
      read(w, "sheet_resistance_ohm", p, c.device.wire.sheet_resistance);
      read(w, "gap_J", p, c.device.wire.gap);
      read(w, "temperature_K", p, c.device.wire.temperature);
    }
    read(d, "spin_distance_m", "device", c.device.spin_distance);
    read(d, "field_map_half_width_m", "device", c.device.field_map_half_width);
    read(d, "field_map_step_m", "device", c.device.field_map_step);
  }

  if (j.contains("model")) {
    const auto& m = j.at("model");
    reject_unknown(m, "model",
                   {"g_rad_per_s", "kappa_per_s", "kappa1_per_s", "gamma_phi_per_s",
                    "gamma_dec_per_s", "delta_r_rad_per_s", "delta_s_rad_per_s", "drive",
                    "beta_re_sqrt_per_s", "beta_im_sqrt_per_s", "theta_rad", "n_fock"});
    read_model_fields(m, "model", c.model);
    read_enum(m, "drive", "model", c.drive, kDrive);
  }

  read(j, "eta", "", c.eta_list);
  read(j, "trials", "", c.trials);
  if (j.contains("duration")) {
    const auto& d = j.at("duration");
    reject_unknown(d, "duration", {"value", "unit"});
    read(d, "value", "duration", c.duration.value);
    read_enum(d, "unit", "duration", c.duration.unit, kUnits);
  }
  read(j, "dt_s", "", c.dt);
  read(j, "seed", "", c.seed);
  read(j, "snapshot_times_tau1", "", c.snapshot_times_tau1);
  read(j, "sample_stride", "", c.sample_stride);
  read(j, "prior_spin", "", c.prior_spin);
  read_enum(j, "scheme", "", c.scheme, kSchemes);
  read_enum(j, "initial_state", "", c.initial, kInitial);
  if (j.contains("levels")) {
    const auto& l = j.at("levels");
    reject_unknown(l, "levels", {"field_min_T", "field_max_T", "field_step_T"});
    read(l, "field_min_T", "levels", c.levels.field_min);
    read(l, "field_max_T", "levels", c.levels.field_max);
    read(l, "field_step_T", "levels", c.levels.field_step);
  }
  read(j, "output_dir", "", c.output_dir);
  if (!c.eta_list.empty()) c.model.eta = c.eta_list.front();
  c.validate();
  return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["preset"] = c.preset;
  j["spin"] = {{"system", enum_name(c.spin.system, kSystems)},
               {"b0_T", c.spin.b0},
               {"lower", {c.spin.lower.first, c.spin.lower.second}},
               {"upper", {c.spin.upper.first, c.spin.upper.second}},
               {"nv",
                {{"zero_field_splitting_rad_per_s", c.spin.nv.zero_field_splitting},
                 {"hyperfine_z_rad_per_s", c.spin.nv.hyperfine_z},
                 {"axis_angle_rad", c.spin.nv.axis_angle}}},
               {"bi",
                {{"hyperfine_rad_per_s", c.spin.bi.hyperfine},
                 {"nuclear_spin", c.spin.bi.nuclear_spin}}}};
  const auto& r = c.device.resonator;
  const auto& w = c.device.wire;
  j["device"] = {{"resonator",
                  {{"omega_r_rad_per_s", r.omega_r},
                   {"impedance_ohm", r.impedance},
                   {"kappa_per_s", r.kappa},
                   {"kappa1_per_s", r.kappa1}}},
                 {"wire",
                  {{"width_m", w.width},
                   {"thickness_m", w.thickness},
                   {"length_m", w.length},
                   {"sheet_resistance_ohm", w.sheet_resistance},
                   {"gap_J", w.gap},
                   {"temperature_K", w.temperature}}},
                 {"spin_distance_m", c.device.spin_distance},
                 {"field_map_half_width_m", c.device.field_map_half_width},
                 {"field_map_step_m", c.device.field_map_step}};
  auto model = model_fields(c.model);
  model["drive"] = enum_name(c.drive, kDrive);
  j["model"] = model;
  j["eta"] = c.eta_list;
  j["trials"] = static_cast<std::uint64_t>(c.trials);
  j["duration"] = {{"value", c.duration.value}, {"unit", enum_name(c.duration.unit, kUnits)}};
  j["dt_s"] = c.dt;
  j["seed"] = c.seed;
  j["snapshot_times_tau1"] = c.snapshot_times_tau1;
  j["sample_stride"] = static_cast<std::uint64_t>(c.sample_stride);
  j["prior_spin"] = c.prior_spin;
  j["scheme"] = enum_name(c.scheme, kSchemes);
  j["initial_state"] = enum_name(c.initial, kInitial);
  j["levels"] = {{"field_min_T", c.levels.field_min},
                 {"field_max_T", c.levels.field_max},
                 {"field_step_T", c.levels.field_step}};
  j["output_dir"] = c.output_dir;
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", fmt::format("cannot open '{}'", path.string()));
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", fmt::format("'{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return config_from_json(j);
}

std::string to_string(SmeScheme s) { return enum_name(s, kSchemes); }
std::string to_string(InitialState s) { return enum_name(s, kInitial); }
std::string to_string(Hypothesis h) { return h == Hypothesis::spin ? "spin" : "no_spin"; }
std::string to_string(SpinSystem s) { return enum_name(s, kSystems); }

}  // namespace spindet
