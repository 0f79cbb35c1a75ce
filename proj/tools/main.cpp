// Copyright 2026 The tfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// tfqkd: strategy sweeps and QBER scans for asymmetric twin-field QKD.
//
//   tfqkd sweep --config <path> --out <path> [--workers N] [--dump-lp]
//   tfqkd qber-scan --config <path> --out <path>
//
// Exit status: 0 success, 2 configuration error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "tfqkd/errors.hpp"
#include "tfqkd/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tfqkd::ConfigError("", "cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate optimisation for asymmetric twin-field QKD"};
  app.set_version_flag("--version", std::string(TFQKD_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int workers = 1;
  bool dump_lp = false;

  auto* sweep = app.add_subcommand("sweep", "Optimise every strategy over a loss grid");
  sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--workers", workers, "Parallel sweep points (0 = hardware threads)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_flag("--dump-lp", dump_lp, "Also write the decoy LPs to <out>.lp.txt");

  auto* scan = app.add_subcommand("qber-scan", "QBER and phase-error bound against intensity asymmetry");
  scan->add_option("--config", config_path, "JSON scan configuration")->required();
  scan->add_option("--out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) {
      const auto config = tfqkd::SweepConfig::parse(read_config(config_path));
      if (workers == 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      const auto rows = tfqkd::run_sweep(config, workers);
      std::ostringstream csv;
      tfqkd::write_sweep_csv(csv, config, rows);
      write_file(out_path, csv.str());
      if (dump_lp) write_file(out_path + ".lp.txt", tfqkd::dump_sweep_lps(config, rows));
    } else {
      const auto config = tfqkd::QberScanConfig::parse(read_config(config_path));
      const auto rows = tfqkd::run_qber_scan(config);
      std::ostringstream csv;
      tfqkd::write_qber_scan_csv(csv, config, rows);
      write_file(out_path, csv.str());
    }
  } catch (const tfqkd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
