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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spindet/config.hpp"
#include "spindet/ensemble.hpp"

namespace spindet {

struct DesignReport {
  // Resonator and nanowire.
  double delta_i = 0.0;           // A
  double spin_x = 0.0, spin_y = 0.0;  // m, spin position in the wire cross-section frame
  Vec3 delta_b = Vec3::Zero();    // T
  double kinetic_inductance = 0.0;
  double quality_factor = 0.0;
  // Spin transition at b0.
  double b0 = 0.0;
  double transition_frequency = 0.0;  // rad/s; 0 for a custom two-level system
  double matrix_element = 0.5;        // |<0|S.n|1>| along delta_b
  std::optional<double> resonance_field;  // T where the transition meets omega_r
  double g_device = 0.0;              // rad/s from the device chain
  // Rates with the model coupling.
  double g = 0.0;
  double kappa = 0.0;
  double gamma_phi = 0.0;
  double gamma_p = 0.0;
  double gamma2 = 0.0;
  double tau1 = 0.0;
  double eta = 1.0;
  double tau_eta = 0.0;
  double alpha_sat = 0.0;
  std::vector<std::string> warnings;
};

DesignReport compute_design(const RunConfig& config);
nlohmann::json design_report_json(const DesignReport& report);

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> summary;   // one line each, printed by the caller
  std::vector<std::string> warnings;
};

/// design.json and field_map.csv.
CommandResult cmd_design(const RunConfig& config);
/// levels.csv over config.levels.
CommandResult cmd_levels(const RunConfig& config);
/// record_{spin,no_spin}.csv + .json sidecars and traces.csv, both records from config.seed.
CommandResult cmd_simulate(const RunConfig& config);
/// fig5b.csv, fig6.csv, fig7.csv and manifest.json over config.eta_list.
CommandResult cmd_ensemble(const RunConfig& config, Execution execution = Execution::parallel);

std::vector<double> level_sweep_fields(const LevelsConfig& levels);

}  // namespace spindet
