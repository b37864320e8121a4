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
#include <string>
#include <vector>

#include <json.hpp>

#include "spindet/config.hpp"
#include "spindet/device.hpp"
#include "spindet/dynamics.hpp"
#include "spindet/ensemble.hpp"
#include "spindet/spin_models.hpp"

// Writers for every file the CLI emits. Numbers are printed with 17
// significant digits so outputs are byte-identical across reruns and replay
// reads back the exact doubles.

namespace spindet {

std::string format_number(double x);

/// B0_T, level_index, F_label_or_mS_mI, energy_over_h_Hz
std::string levels_csv(const SpinSystemModel& model, const LevelSweep& sweep);

/// x_m, y_m, Bx_T, By_T, |B|_T on a square grid centred on the wire; points
/// inside the conductor are skipped.
std::string field_map_csv(const NanowireGeometry& geom, double current, double half_width,
                          double step);

/// t_s, dY, sigma_x, sigma_y, sigma_z; sigma columns are empty for no-spin records.
std::string record_csv(const GeneratedRecord& generated);

struct RecordMeta {
  ModelParams params;
  double duration = 0.0;
  SmeScheme scheme = SmeScheme::kraus;
  InitialState initial = InitialState::steady;
};

nlohmann::json record_sidecar(const GeneratedRecord& generated, const RecordMeta& meta);
/// Regenerates a record from its sidecar.
GeneratedRecord replay_record(const nlohmann::json& sidecar);

struct EtaRun {
  double eta = 0.0;
  EnsembleStats stats;
};

/// eta, t_s, zeta, hypothesis: zeta at the last sample of every trial.
std::string fig5b_csv(const std::vector<EtaRun>& runs);
/// eta, t_s, t_over_tau1, p_spin, hypothesis at every snapshot time.
std::string fig6_csv(const std::vector<EtaRun>& runs);
/// t_s, error_threshold_analytic, error_threshold_empirical, error_bayes_empirical, eta,
/// followed by the Wilson 95% bands.
std::string fig7_csv(const std::vector<EtaRun>& runs);

void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace spindet
