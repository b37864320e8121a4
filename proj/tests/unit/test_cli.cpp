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

#include <doctest.h>

#include "approx.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "spindet/exports.hpp"

#ifndef SPINDET_CLI_PATH
#error "SPINDET_CLI_PATH must name the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("spindet_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SPINDET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string csv_field(const std::string& line, int col) {
  std::stringstream ss(line);
  std::string field;
  for (int i = 0; i <= col; ++i) std::getline(ss, field, ',');
  return field;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("design presets") {
    const auto nv = scratch("design_nv");
    REQUIRE(run("design --preset nv --out " + nv.string()) == 0);
    const auto a = json::parse(slurp(nv / "design.json"));
    CHECK(a["model"]["g_over_2pi_Hz"].get<double>() == approx(6.5e3).epsilon(0.02));
    CHECK(a["model"]["tau1_s"].get<double>() == approx(0.35e-3).epsilon(0.05));
    CHECK(a["device"]["kinetic_inductance_H"].get<double>() == approx(50e-12).epsilon(0.05));
    CHECK(lines(slurp(nv / "field_map.csv")) > 1000);

    const auto bi = scratch("design_bi");
    REQUIRE(run("design --preset bi --out " + bi.string()) == 0);
    const auto b = json::parse(slurp(bi / "design.json"));
    CHECK(b["model"]["g_over_2pi_Hz"].get<double>() == approx(8.0e3).epsilon(0.02));
    CHECK(b["model"]["tau1_s"].get<double>() == approx(0.17e-3).epsilon(0.05));
    CHECK(b["spin"]["g_device_over_2pi_Hz"].get<double>() > 0.0);

    const auto zr = scratch("design_zr");
    REQUIRE(run("design --preset nv --zr 61.2 --out " + zr.string()) == 0);
    const auto c = json::parse(slurp(zr / "design.json"));
    CHECK(c["device"]["delta_i_A"].get<double>() ==
          approx(0.5 * a["device"]["delta_i_A"].get<double>()).epsilon(1e-12));
  }

  TEST_CASE("config errors exit with code 2") {
    const auto dir = scratch("bad_config");
    std::ofstream(dir / "bad.json") << R"({"schema_version": 1, "device": {"wire": {"width_m": -1e-8}}})";
    CHECK(run("design --config " + (dir / "bad.json").string() + " --out " + dir.string()) == 2);
    std::ofstream(dir / "unknown.json") << R"({"schema_version": 1, "extra": true})";
    CHECK(run("design --config " + (dir / "unknown.json").string()) == 2);
    CHECK(run("design --preset nv --bogus-flag") == 2);
    CHECK(run("simulate --duration 5 --out " + dir.string()) == 2);
    CHECK(run("ensemble --trials 50 --out " + dir.string()) == 2);
    CHECK(run("levels --preset sim --out " + dir.string()) == 2);
    CHECK(run("") == 2);
  }

  TEST_CASE("level diagrams") {
    const auto nv = scratch("levels_nv");
    REQUIRE(run("levels --preset nv --field-min 0 --field-max 0.01 --field-step 0.001 --out " +
                nv.string()) == 0);
    const auto text = slurp(nv / "levels.csv");
    CHECK(text.rfind("B0_T,level_index,F_label_or_mS_mI,energy_over_h_Hz\n", 0) == 0);
    CHECK(lines(text) == 1 + 11 * 6);

    const auto bi = scratch("levels_bi");
    REQUIRE(run("levels --preset bi --out " + bi.string()) == 0);
    std::stringstream ss(slurp(bi / "levels.csv"));
    std::string line;
    std::getline(ss, line);
    std::set<std::string> f4, f5;
    std::set<std::string> fields;
    while (std::getline(ss, line)) {
      fields.insert(csv_field(line, 0));
      const auto label = csv_field(line, 2);
      (label.rfind("F=4", 0) == 0 ? f4 : f5).insert(label);
    }
    CHECK(fields.size() == 101);
    CHECK(f4.size() == 9);
    CHECK(f5.size() == 11);

    const auto zero = scratch("levels_zero");
    REQUIRE(run("levels --preset bi --field-min 0.003 --field-max 0.003 --out " + zero.string()) == 0);
    CHECK(lines(slurp(zero / "levels.csv")) == 1 + 20);
  }

  TEST_CASE("simulate: default duration, empty run and determinism") {
    const auto def = scratch("sim_default");
    REQUIRE(run("simulate --preset sim --seed 3 --out " + def.string()) == 0);
    const auto side = json::parse(slurp(def / "record_spin.json"));
    CHECK(side["duration_s"].get<double>() >= 4.8e-3);
    CHECK(side["duration_s"].get<double>() <= 5.3e-3);
    CHECK(side["seed"].get<std::uint64_t>() == 3);
    // The sidecar regenerates the record exactly.
    const auto replay = spindet::replay_record(side);
    CHECK(spindet::record_csv(replay) == slurp(def / "record_spin.csv"));
    const auto none = json::parse(slurp(def / "record_no_spin.json"));
    CHECK(spindet::record_csv(spindet::replay_record(none)) == slurp(def / "record_no_spin.csv"));
    CHECK(lines(slurp(def / "traces.csv")) == 1 + side["steps"].get<std::size_t>());

    const auto empty = scratch("sim_empty");
    REQUIRE(run("simulate --duration 0tau1 --out " + empty.string()) == 0);
    CHECK(lines(slurp(empty / "record_spin.csv")) == 1);
    CHECK(lines(slurp(empty / "traces.csv")) == 1);

    const auto a = scratch("sim_a"), b = scratch("sim_b");
    REQUIRE(run("simulate --seed 7 --duration 2tau1 --out " + a.string()) == 0);
    REQUIRE(run("simulate --seed 7 --duration 2tau1 --out " + b.string()) == 0);
    for (const char* f : {"record_spin.csv", "record_spin.json", "record_no_spin.csv",
                          "record_no_spin.json", "traces.csv"}) {
      CHECK(slurp(a / f) == slurp(b / f));
    }
  }

  TEST_CASE("ensemble smoke run over three efficiencies") {
    const auto a = scratch("ens_a"), b = scratch("ens_b");
    const auto start = std::chrono::steady_clock::now();
    REQUIRE(run("ensemble --trials 100 --eta 0.25,0.5,1.0 --seed 11 --out " + a.string()) == 0);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    MESSAGE("100-trial, three-eta ensemble: " << seconds << " s");
    CHECK(seconds < 3 * 60.0);
    std::stringstream ss(slurp(a / "fig7.csv"));
    std::string line;
    std::getline(ss, line);
    CHECK(line.rfind("t_s,error_threshold_analytic,error_threshold_empirical,error_bayes_empirical,eta", 0) == 0);
    std::set<std::string> etas;
    while (std::getline(ss, line)) etas.insert(csv_field(line, 4));
    CHECK(etas == std::set<std::string>{"0.25", "0.5", "1"});
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["runs"].size() == 3);
    CHECK(manifest["runs"][0]["trials"].get<int>() == 100);
    CHECK(lines(slurp(a / "fig5b.csv")) == 1 + 3 * 200);

    REQUIRE(run("ensemble --trials 100 --eta 0.25,0.5,1.0 --seed 11 --serial --out " + b.string()) == 0);
    for (const char* f : {"fig5b.csv", "fig6.csv", "fig7.csv"}) CHECK(slurp(a / f) == slurp(b / f));
    // Manifests differ only in output_dir.
    auto ma = json::parse(slurp(a / "manifest.json")), mb = json::parse(slurp(b / "manifest.json"));
    ma["config"].erase("output_dir");
    mb["config"].erase("output_dir");
    CHECK(ma.dump() == mb.dump());
  }
}
