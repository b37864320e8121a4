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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spindet/device.hpp"
#include "spindet/dynamics.hpp"
#include "spindet/model_params.hpp"
#include "spindet/spin_models.hpp"

namespace spindet {

inline constexpr int kSchemaVersion = 1;

enum class SpinSystem { nv, bi, custom };

struct DurationSpec {
  enum class Unit { tau1, seconds };
  double value = 20.0;
  Unit unit = Unit::tau1;

  double seconds(double tau1) const { return unit == Unit::tau1 ? value * tau1 : value; }
};

/// Parses "20tau1", "20 tau1", "5e-3s", "5e-3 s". Throws ConfigError.
DurationSpec parse_duration(std::string_view text);

struct SpinConfig {
  SpinSystem system = SpinSystem::custom;
  NVParams nv;
  BiParams bi;
  double b0 = 0.0;  // T
  LevelLabel lower;
  LevelLabel upper;
};

struct DeviceConfig {
  ResonatorParams resonator;
  NanowireGeometry wire;
  double spin_distance = 15e-9;       // m, from the lower wire surface
  double field_map_half_width = 5e-8; // m
  double field_map_step = 1e-9;       // m
};

struct LevelsConfig {
  double field_min = 0.0;   // T
  double field_max = 1e-2;  // T
  double field_step = 1e-4; // T
};

enum class DrivePolicy { saturating, explicit_beta };

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string preset = "sim";  // defaults for fields absent from a config file
  SpinConfig spin;
  DeviceConfig device;
  ModelParams model;  // eta comes from eta_list
  DrivePolicy drive = DrivePolicy::saturating;
  std::vector<double> eta_list{0.5};
  std::size_t trials = 1000;
  DurationSpec duration;
  double dt = 0.0;  // s; 0 selects the largest stable step
  std::uint64_t seed = 1;
  std::vector<double> snapshot_times_tau1{0.2, 0.4, 2.0, 4.0, 6.0, 12.0};
  std::size_t sample_stride = 0;
  double prior_spin = 0.5;
  SmeScheme scheme = SmeScheme::kraus;
  InitialState initial = InitialState::steady;
  LevelsConfig levels;
  std::string output_dir = "out";

  /// Model parameters at efficiency `eta` with the drive policy applied.
  ModelParams resolved_model(double eta) const;
  /// Throws ConfigError with the JSON path of the first invalid value.
  void validate() const;
};

/// Built-in parameter sets: "nv", "bi", "sim".
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Strict parser: unknown or mistyped fields throw ConfigError naming the path.
/// Missing fields keep the defaults of the preset named by "preset" (or "sim").
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json model_params_to_json(const ModelParams& p);
ModelParams model_params_from_json(const nlohmann::json& j, const std::string& path = "model");

std::string to_string(SmeScheme s);
std::string to_string(InitialState s);
std::string to_string(Hypothesis h);
std::string to_string(SpinSystem s);

}  // namespace spindet
