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

#include "spindet/commands.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spindet/detection.hpp"
#include "spindet/errors.hpp"
#include "spindet/exports.hpp"

namespace spindet {

namespace {

std::optional<SpinSystemModel> spin_model(const RunConfig& c) {
  switch (c.spin.system) {
    case SpinSystem::nv:
      return SpinSystemModel::nv(c.spin.nv);
    case SpinSystem::bi:
      return SpinSystemModel::bi(c.spin.bi);
    case SpinSystem::custom:
      break;
  }
  return std::nullopt;
}

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.output_dir) / name;
}

}  // namespace

std::vector<double> level_sweep_fields(const LevelsConfig& levels) {
  std::vector<double> fields;
  if (levels.field_max <= levels.field_min) return {levels.field_min};
  const auto n = static_cast<std::size_t>(
      std::floor((levels.field_max - levels.field_min) / levels.field_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    fields.push_back(levels.field_min + static_cast<double>(i) * levels.field_step);
  }
  return fields;
}

DesignReport compute_design(const RunConfig& config) {
  config.validate();
  DesignReport r;
  const auto& dev = config.device;
  r.delta_i = zero_point_current(dev.resonator);
  std::tie(r.spin_x, r.spin_y) = point_below_wire(dev.wire, dev.spin_distance);
  r.delta_b = rect_wire_field(dev.wire, r.delta_i, r.spin_x, r.spin_y);
  r.kinetic_inductance = kinetic_inductance(dev.wire);
  r.quality_factor = dev.resonator.quality_factor();
  r.warnings = dev.wire.warnings();

  r.b0 = config.spin.b0;
  if (const auto model = spin_model(config)) {
    const auto pair = model->transition(config.spin.lower, config.spin.upper, r.b0);
    r.transition_frequency = pair.omega;
    r.g_device = coupling_constant(pair, r.delta_b);
    r.matrix_element = r.g_device / (constants::gamma_e * r.delta_b.norm());
    for (auto& w : model->field_warnings(r.b0)) r.warnings.push_back(std::move(w));
    try {
      r.resonance_field = resonance_field_search(*model, config.spin.lower, config.spin.upper,
                                                 dev.resonator.omega_r, 0.0, 2e-2);
    } catch (const NumericalError& e) {
      r.warnings.push_back(fmt::format("no resonance with omega_r below 20 mT: {}", e.what()));
    }
  } else {
    // Isolated electron: |<0|S_x|1>| = 1/2 for delta_b along x.
    r.g_device = constants::gamma_e * r.delta_b.norm() * 0.5;
  }

  const ModelParams p = config.resolved_model(config.eta_list.front());
  r.g = p.g;
  r.kappa = p.kappa;
  r.gamma_phi = p.gamma_phi;
  r.gamma_p = p.purcell_rate();
  r.gamma2 = p.gamma2();
  r.tau1 = p.tau1();
  r.eta = p.eta;
  r.tau_eta = r.tau1 / r.eta;
  r.alpha_sat = p.saturation_amplitude();
  for (auto& w : effective_model_warnings(p)) r.warnings.push_back(std::move(w));
  return r;
}

nlohmann::json design_report_json(const DesignReport& r) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["device"] = {{"delta_i_A", r.delta_i},
                 {"spin_position_m", {r.spin_x, r.spin_y}},
                 {"delta_B_T", vec_json(r.delta_b)},
                 {"delta_B_abs_T", r.delta_b.norm()},
                 {"kinetic_inductance_H", r.kinetic_inductance},
                 {"quality_factor", r.quality_factor}};
  j["spin"] = {{"b0_T", r.b0},
               {"transition_frequency_Hz", r.transition_frequency / kTwoPi},
               {"matrix_element_abs", r.matrix_element},
               {"resonance_field_T",
                r.resonance_field ? nlohmann::json(*r.resonance_field) : nlohmann::json(nullptr)},
               {"g_device_rad_per_s", r.g_device},
               {"g_device_over_2pi_Hz", r.g_device / kTwoPi}};
  j["model"] = {{"g_rad_per_s", r.g},
                {"g_over_2pi_Hz", r.g / kTwoPi},
                {"kappa_per_s", r.kappa},
                {"gamma_phi_per_s", r.gamma_phi},
                {"gamma_p_per_s", r.gamma_p},
                {"gamma_p_inv_s", 1.0 / r.gamma_p},
                {"gamma2_per_s", r.gamma2},
                {"tau1_s", r.tau1},
                {"eta", r.eta},
                {"tau_eta_s", r.tau_eta},
                {"alpha_sat", r.alpha_sat}};
  j["warnings"] = r.warnings;
  return j;
}

CommandResult cmd_design(const RunConfig& config) {
  const auto r = compute_design(config);
  CommandResult out;
  const auto design = out_path(config, "design.json");
  const auto map = out_path(config, "field_map.csv");
  write_json(design, design_report_json(r));
  write_text(map, field_map_csv(config.device.wire, r.delta_i, config.device.field_map_half_width,
                                config.device.field_map_step));
  out.files = {design, map};
  out.summary = {
      fmt::format("delta_i = {:.4g} nA, |delta_B| = {:.4g} uT at {:.3g} nm below the wire",
                  r.delta_i * 1e9, r.delta_b.norm() * 1e6, config.device.spin_distance * 1e9),
      fmt::format("L_k = {:.4g} pH, Q = {:.4g}", r.kinetic_inductance * 1e12, r.quality_factor),
      fmt::format("device-chain g/2pi = {:.4g} kHz (|<0|S|1>| = {:.4f})", r.g_device / kTwoPi * 1e-3,
                  r.matrix_element),
      fmt::format("g/2pi = {:.4g} kHz, gamma_p^-1 = {:.4g} us, tau1 = {:.4g} ms, tau_eta = {:.4g} ms "
                  "(eta = {:.3g})",
                  r.g / kTwoPi * 1e-3, 1e6 / r.gamma_p, r.tau1 * 1e3, r.tau_eta * 1e3, r.eta)};
  if (r.transition_frequency > 0.0) {
    out.summary.push_back(fmt::format(
        "transition {:.6g} GHz at {:.4g} mT; resonance with omega_r at {}",
        r.transition_frequency / kTwoPi * 1e-9, r.b0 * 1e3,
        r.resonance_field ? fmt::format("{:.4g} mT", *r.resonance_field * 1e3) : "none"));
  }
  out.warnings = r.warnings;
  return out;
}

CommandResult cmd_levels(const RunConfig& config) {
  config.validate();
  const auto model = spin_model(config);
  if (!model) throw ConfigError("spin.system", "levels need an nv or bi spin system");
  const auto fields = level_sweep_fields(config.levels);
  const auto sweep = sweep_levels(*model, fields);
  CommandResult out;
  const auto path = out_path(config, "levels.csv");
  write_text(path, levels_csv(*model, sweep));
  out.files = {path};
  out.summary = {fmt::format("{} levels x {} fields, {:.4g} to {:.4g} mT", sweep.energies.cols(),
                             fields.size(), fields.front() * 1e3, fields.back() * 1e3)};
  out.warnings = model->field_warnings(fields.back());
  return out;
}

CommandResult cmd_simulate(const RunConfig& config) {
  config.validate();
  const ModelParams p = config.resolved_model(config.eta_list.front());
  const double dt = config.dt > 0.0 ? config.dt : SpinSme::max_dt(p);
  const double duration = config.duration.seconds(p.tau1());
  GenerateOptions options;
  options.scheme = config.scheme;
  options.initial = config.initial;
  const RecordMeta meta{p, duration, config.scheme, config.initial};

  CommandResult out;
  out.warnings = effective_model_warnings(p);
  std::vector<GeneratedRecord> records;
  for (auto h : {Hypothesis::spin, Hypothesis::no_spin}) {
    auto gen = generate_record(p, duration, dt, config.seed, h, options);
    const auto stem = "record_" + to_string(h);
    const auto csv = out_path(config, stem + ".csv");
    const auto side = out_path(config, stem + ".json");
    write_text(csv, record_csv(gen));
    write_json(side, record_sidecar(gen, meta));
    out.files.push_back(csv);
    out.files.push_back(side);
    records.push_back(std::move(gen));
  }

  // zeta(t) and p_spin(t) for both records.
  std::string traces = "t_s,zeta_spin,zeta_no_spin,p_spin_spin_record,p_spin_no_spin_record\n";
  BayesFilter on_spin(p, dt, config.prior_spin, config.scheme, config.initial);
  BayesFilter on_none(p, dt, config.prior_spin, config.scheme, config.initial);
  const auto& a = records[0].record.increments;
  const auto& b = records[1].record.increments;
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = static_cast<double>(k + 1) * dt;
    sum_a += a[k];
    sum_b += b[k];
    on_spin.update(a[k]);
    on_none.update(b[k]);
    traces += fmt::format("{},{},{},{},{}\n", format_number(t), format_number(sum_a / std::sqrt(t)),
                          format_number(sum_b / std::sqrt(t)), format_number(on_spin.p_spin()),
                          format_number(on_none.p_spin()));
  }
  const auto tpath = out_path(config, "traces.csv");
  write_text(tpath, traces);
  out.files.push_back(tpath);
  out.summary = {fmt::format("{} steps of {:.4g} s ({:.4g} ms = {:.4g} tau1), seed {}", a.size(), dt,
                             duration * 1e3, duration / p.tau1(), config.seed)};
  if (!a.empty()) {
    out.summary.push_back(fmt::format("final p_spin: {:.4g} (spin record), {:.4g} (no-spin record)",
                                      on_spin.p_spin(), on_none.p_spin()));
  }
  return out;
}

CommandResult cmd_ensemble(const RunConfig& config, Execution execution) {
  config.validate();
  if (config.trials < 100) throw ConfigError("trials", "ensemble runs need at least 100 trials");
  std::vector<EtaRun> runs;
  CommandResult out;
  nlohmann::json per_eta = nlohmann::json::array();
  for (double eta : config.eta_list) {
    EnsembleConfig ec;
    ec.params = config.resolved_model(eta);
    ec.trials = config.trials;
    ec.duration = config.duration.seconds(ec.params.tau1());
    ec.dt = config.dt;
    ec.master_seed = config.seed;
    for (double t : config.snapshot_times_tau1) ec.snapshot_times.push_back(t * ec.params.tau1());
    ec.snapshot_times.push_back(ec.duration);
    ec.sample_stride = config.sample_stride;
    ec.prior_spin = config.prior_spin;
    ec.scheme = config.scheme;
    ec.initial = config.initial;
    EtaRun run{eta, run_ensemble(ec, execution)};
    const auto& s = run.stats;

    nlohmann::json entry{{"eta", eta},
                         {"trials", static_cast<std::uint64_t>(s.trials)},
                         {"completed", static_cast<std::uint64_t>(s.completed)},
                         {"excluded", static_cast<std::uint64_t>(s.excluded)},
                         {"exclusions", s.failures},
                         {"dt_s", s.dt},
                         {"sample_stride", static_cast<std::uint64_t>(s.sample_stride)},
                         {"duration_s", ec.duration},
                         {"tau1_s", s.tau1},
                         {"params", model_params_to_json(ec.params)},
                         {"params_digest", fmt::format("{:016x}", ec.params.digest())},
                         {"seed_rule", "trial i: spin record derive(seed, 2i), no-spin derive(seed, 2i+1)"}};
    if (!s.errors.times.empty()) {
      const auto last = s.errors.times.size() - 1;
      const double separation = s.zeta_spin[last].mean - s.zeta_no_spin[last].mean;
      const double speedup = bayes_speedup(s, 1e-2);
      entry["final"] = {{"t_s", s.errors.times[last]},
                        {"zeta_variance_spin", s.zeta_spin[last].variance},
                        {"zeta_variance_no_spin", s.zeta_no_spin[last].variance},
                        {"zeta_mean_separation", separation},
                        {"error_threshold_empirical", s.errors.threshold_empirical[last]},
                        {"error_bayes_empirical", s.errors.bayes_empirical[last]}};
      entry["bayes_speedup_at_1e-2"] =
          std::isfinite(speedup) ? nlohmann::json(speedup) : nlohmann::json(nullptr);
      out.summary.push_back(fmt::format(
          "eta = {:.3g}: {} / {} trials, separation {:.4g}, variances {:.4g} / {:.4g}, errors "
          "{:.3g} (threshold) {:.3g} (Bayes) at {:.4g} ms",
          eta, s.completed, s.trials, separation, s.zeta_spin[last].variance,
          s.zeta_no_spin[last].variance, s.errors.threshold_empirical[last],
          s.errors.bayes_empirical[last], s.errors.times[last] * 1e3));
    }
    if (s.excluded > 0) {
      out.warnings.push_back(fmt::format("eta = {:.3g}: {} trials excluded", eta, s.excluded));
    }
    per_eta.push_back(std::move(entry));
    runs.push_back(std::move(run));
  }

  const auto f5 = out_path(config, "fig5b.csv");
  const auto f6 = out_path(config, "fig6.csv");
  const auto f7 = out_path(config, "fig7.csv");
  const auto manifest = out_path(config, "manifest.json");
  write_text(f5, fig5b_csv(runs));
  write_text(f6, fig6_csv(runs));
  write_text(f7, fig7_csv(runs));
  write_json(manifest, nlohmann::json{{"schema_version", kSchemaVersion},
                                      {"config", config_to_json(config)},
                                      {"runs", per_eta}});
  out.files = {f5, f6, f7, manifest};
  return out;
}

}  // namespace spindet
