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

#include <cstdio>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "spindet/commands.hpp"
#include "spindet/config.hpp"
#include "spindet/errors.hpp"

using namespace spindet;

namespace {

struct Overrides {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string eta;
  std::string duration;
  std::string out;
  std::optional<double> zr;
  std::optional<double> field_min, field_max, field_step;
  bool serial = false;
};

std::vector<double> parse_eta_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--eta", fmt::format("'{}' is not a number", item));
    }
  }
  if (values.empty()) throw ConfigError("--eta", "empty list");
  return values;
}

RunConfig build_config(const Overrides& o) {
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw ConfigError("--preset", "give either --config or --preset, not both");
  }
  RunConfig c = o.config_path.empty() ? preset_config(o.preset.empty() ? "sim" : o.preset)
                                      : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (!o.eta.empty()) {
    c.eta_list = parse_eta_list(o.eta);
    c.model.eta = c.eta_list.front();
  }
  if (!o.duration.empty()) c.duration = parse_duration(o.duration);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.zr) c.device.resonator.impedance = *o.zr;
  if (o.field_min) c.levels.field_min = *o.field_min;
  if (o.field_max) c.levels.field_max = *o.field_max;
  if (o.field_step) c.levels.field_step = *o.field_step;
  c.validate();
  return c;
}

// Single console writer.
void report(const CommandResult& r) {
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& line : r.summary) std::printf("%s\n", line.c_str());
  for (const auto& f : r.files) std::printf("wrote %s\n", f.string().c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-spin detection simulator: device design, level diagrams, homodyne "
               "trajectories and discrimination ensembles"};
  app.require_subcommand(1);
  Overrides o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "Built-in parameter set")
        ->check(CLI::IsMember({"nv", "bi", "sim"}));
    sub->add_option("--seed", o.seed, "Master seed (unsigned 64-bit)");
    sub->add_option("--eta", o.eta, "Detection efficiencies, comma separated");
    sub->add_option("--duration", o.duration, "Duration with unit, e.g. 20tau1 or 5e-3s");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--zr", o.zr, "Resonator impedance override, ohm");
  };

  auto* design = app.add_subcommand("design", "Zero-point current, wire field, coupling and rates");
  common(design);
  auto* levels = app.add_subcommand("levels", "Energy levels versus static field");
  common(levels);
  levels->add_option("--field-min", o.field_min, "Sweep start, T");
  levels->add_option("--field-max", o.field_max, "Sweep end, T");
  levels->add_option("--field-step", o.field_step, "Sweep step, T");
  auto* simulate = app.add_subcommand("simulate", "One spin and one no-spin homodyne record");
  common(simulate);
  auto* ensemble = app.add_subcommand("ensemble", "Discrimination error statistics over trials");
  common(ensemble);
  ensemble->add_option("--trials", o.trials, "Trials per efficiency");
  ensemble->add_flag("--serial", o.serial, "Use the serial reference path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig config = build_config(o);
    if (design->parsed()) report(cmd_design(config));
    if (levels->parsed()) report(cmd_levels(config));
    if (simulate->parsed()) report(cmd_simulate(config));
    if (ensemble->parsed()) {
      report(cmd_ensemble(config, o.serial ? Execution::serial : Execution::parallel));
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
  return 0;
}
