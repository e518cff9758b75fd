// Copyright 2026 The rblab Authors
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

#include "rblab/experiment.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitRunError = 1;
constexpr int kExitConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rblab: randomized benchmarking experiment runner"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool validate_only = false;
  app.add_option("--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed; overrides the configuration");
  app.add_option("--out", out_dir, "Output directory; overrides the configuration");
  app.add_flag("--validate-only", validate_only, "Check the configuration and exit");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const rblab::ConfigReport report = rblab::parse_experiment_config(buffer.str());
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "config error: " << v << '\n';
    return kExitConfigError;
  }
  rblab::ExperimentConfig config = *report.config;
  if (seed) config.seed = *seed;
  if (out_dir) config.output_dir = *out_dir;
  if (validate_only) {
    std::cout << "config ok: " << config.resolved_json() << '\n';
    return 0;
  }
  try {
    const auto result = rblab::run_experiment(config);
    for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRunError;
  }
  return 0;
}
