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

#pragma once

#include "rblab/clifford.hpp"
#include "rblab/rb_protocol.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rblab {

enum class Command { kSimulate, kTheory, kSweep, kGaugeDemo, kCounterexample };

const char* to_string(Command c);

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

struct GaugeSpec {
  int restarts = 20;
};

struct CounterexampleSpec {
  double lambda = 0.99;
  double alpha_min = 0.99;
  double alpha_max = 1.01;
  int points = 201;
};

/// Parsed experiment configuration. See docs/config.md for the file format.
struct ExperimentConfig {
  Command command = Command::kSimulate;
  std::uint64_t seed = 20170101;
  /// Canonical JSON of the error-model block.
  std::string error_model_json = R"({"name":"coherent_z","theta":0.1})";
  RBConfig rb;
  FitModel fit_model = FitModel::kZeroth;
  SweepSpec sweep;
  GaugeSpec gauge;
  CounterexampleSpec counterexample;
  std::string output_dir = ".";
  std::string output_prefix;

  ErrorModel error_model() const;
  /// Error model with one scalar parameter replaced, for sweeps.
  ErrorModel error_model_with(const std::string& parameter, double value) const;
  /// Full configuration with defaults filled in, as compact JSON with sorted
  /// keys. The output directory is omitted so payloads do not depend on it.
  std::string resolved_json() const;
};

struct ConfigReport {
  std::vector<std::string> violations;
  std::optional<ExperimentConfig> config;

  bool ok() const { return violations.empty(); }
};

/// Parses and validates a JSON configuration. Every violation is reported as
/// "path: message"; unknown keys are violations.
ConfigReport parse_experiment_config(const std::string& text);

struct RunResult {
  std::vector<std::string> files;
};

/// Executes the configured command and writes its outputs into
/// config.output_dir. Module errors are rethrown with the command as context.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace rblab
