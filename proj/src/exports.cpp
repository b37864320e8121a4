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

#include "spindet/exports.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

std::string levels_csv(const SpinSystemModel& model, const LevelSweep& sweep) {
  std::string out = "B0_T,level_index,F_label_or_mS_mI,energy_over_h_Hz\n";
  const bool hyperfine = !model.is_nv();
  for (std::size_t i = 0; i < sweep.fields.size(); ++i) {
    for (Eigen::Index k = 0; k < sweep.energies.cols(); ++k) {
      out += fmt::format("{},{},{},{}\n", format_number(sweep.fields[i]), k,
                         sweep.labels[static_cast<std::size_t>(k)].text(hyperfine),
                         format_number(sweep.energies(static_cast<Eigen::Index>(i), k) / kTwoPi));
    }
  }
  return out;
}

std::string field_map_csv(const NanowireGeometry& geom, double current, double half_width,
                          double step) {
  std::string out = "x_m,y_m,Bx_T,By_T,|B|_T\n";
  const auto n = static_cast<long>(std::floor(half_width / step + 1e-9));
  for (long iy = -n; iy <= n; ++iy) {
    for (long ix = -n; ix <= n; ++ix) {
      const double x = static_cast<double>(ix) * step;
      const double y = static_cast<double>(iy) * step;
      if (std::abs(x) <= 0.5 * geom.width && std::abs(y) <= 0.5 * geom.thickness) continue;
      const Vec3 b = rect_wire_field(geom, current, x, y);
      out += fmt::format("{},{},{},{},{}\n", format_number(x), format_number(y),
                         format_number(b.x()), format_number(b.y()), format_number(b.norm()));
    }
  }
  return out;
}

std::string record_csv(const GeneratedRecord& generated) {
  const auto& rec = generated.record;
  const auto& traj = generated.trajectory;
  const bool has_state = traj.times.size() == rec.increments.size();
  std::string out = "t_s,dY,sigma_x,sigma_y,sigma_z\n";
  for (std::size_t k = 0; k < rec.increments.size(); ++k) {
    const double t = static_cast<double>(k + 1) * rec.dt;
    if (has_state) {
      out += fmt::format("{},{},{},{},{}\n", format_number(t), format_number(rec.increments[k]),
                         format_number(traj.sigma_x[k]), format_number(traj.sigma_y[k]),
                         format_number(traj.sigma_z[k]));
    } else {
      out += fmt::format("{},{},,,\n", format_number(t), format_number(rec.increments[k]));
    }
  }
  return out;
}

nlohmann::json record_sidecar(const GeneratedRecord& generated, const RecordMeta& meta) {
  const auto& rec = generated.record;
  return nlohmann::json{{"schema_version", kSchemaVersion},
                        {"hypothesis", to_string(rec.hypothesis)},
                        {"seed", rec.seed},
                        {"dt_s", rec.dt},
                        {"duration_s", meta.duration},
                        {"steps", static_cast<std::uint64_t>(rec.increments.size())},
                        {"scheme", to_string(meta.scheme)},
                        {"initial_state", to_string(meta.initial)},
                        {"params_digest", fmt::format("{:016x}", rec.params_hash)},
                        {"params", model_params_to_json(meta.params)}};
}

GeneratedRecord replay_record(const nlohmann::json& sidecar) {
  RunConfig shell;
  nlohmann::json run{{"schema_version", kSchemaVersion},
                     {"scheme", sidecar.at("scheme")},
                     {"initial_state", sidecar.at("initial_state")}};
  shell = config_from_json(run);
  const ModelParams p = model_params_from_json(sidecar.at("params"), "params");
  const auto hypothesis =
      sidecar.at("hypothesis").get<std::string>() == "spin" ? Hypothesis::spin : Hypothesis::no_spin;
  GenerateOptions options;
  options.scheme = shell.scheme;
  options.initial = shell.initial;
  auto out = generate_record(p, sidecar.at("duration_s").get<double>(),
                             sidecar.at("dt_s").get<double>(),
                             sidecar.at("seed").get<std::uint64_t>(), hypothesis, options);
  if (fmt::format("{:016x}", out.record.params_hash) != sidecar.at("params_digest")) {
    throw ConfigError("params_digest", "does not match the parameters");
  }
  return out;
}

std::string fig5b_csv(const std::vector<EtaRun>& runs) {
  std::string out = "eta,t_s,zeta,hypothesis\n";
  for (const auto& run : runs) {
    if (run.stats.snapshots.empty()) continue;
    const auto& snap = run.stats.snapshots.back();
    for (double z : snap.zeta_spin) {
      out += fmt::format("{},{},{},spin\n", format_number(run.eta), format_number(snap.time),
                         format_number(z));
    }
    for (double z : snap.zeta_no_spin) {
      out += fmt::format("{},{},{},no_spin\n", format_number(run.eta), format_number(snap.time),
                         format_number(z));
    }
  }
  return out;
}

std::string fig6_csv(const std::vector<EtaRun>& runs) {
  std::string out = "eta,t_s,t_over_tau1,p_spin,hypothesis\n";
  for (const auto& run : runs) {
    const auto& s = run.stats;
    // The last snapshot is the fig5b time.
    for (std::size_t q = 0; q + 1 < s.snapshots.size(); ++q) {
      const auto& snap = s.snapshots[q];
      const auto prefix = fmt::format("{},{},{}", format_number(run.eta), format_number(snap.time),
                                      format_number(snap.time / s.tau1));
      for (double p : snap.p_spin_given_spin) out += fmt::format("{},{},spin\n", prefix, format_number(p));
      for (double p : snap.p_spin_given_no_spin) {
        out += fmt::format("{},{},no_spin\n", prefix, format_number(p));
      }
    }
  }
  return out;
}

std::string fig7_csv(const std::vector<EtaRun>& runs) {
  std::string out =
      "t_s,error_threshold_analytic,error_threshold_empirical,error_bayes_empirical,eta,"
      "threshold_ci_lo,threshold_ci_hi,bayes_ci_lo,bayes_ci_hi\n";
  for (const auto& run : runs) {
    const auto& e = run.stats.errors;
    for (std::size_t s = 0; s < e.times.size(); ++s) {
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(e.times[s]),
                         format_number(e.threshold_analytic[s]),
                         format_number(e.threshold_empirical[s]), format_number(e.bayes_empirical[s]),
                         format_number(run.eta), format_number(e.threshold_band[s].lo),
                         format_number(e.threshold_band[s].hi), format_number(e.bayes_band[s].lo),
                         format_number(e.bayes_band[s].hi));
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("--out", fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f) throw ConfigError("--out", fmt::format("write to '{}' failed", path.string()));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace spindet
