// Copyright 2026 The qwgasket Authors
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

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwg/analysis.hpp"
#include "qwg/gasket.hpp"

namespace qwg::cli {

enum class Command { Simulate, Sweep, Limiting, Tvd, Mixing, Verify };
std::string_view to_string(Command command);
/// Throws ConfigError.
Command parse_command(std::string_view text);

enum class DenseMode { Auto, On, Off };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCap = 3;
inline constexpr int kExitVerify = 4;

/// Environment variable overriding the worker count.
inline constexpr const char* kWorkersEnv = "QWG_WORKERS";

struct ExperimentConfig {
  Command command = Command::Simulate;
  int generation = 4;
  /// Generations for `mixing`; empty means {generation}.
  std::vector<int> generations;
  /// Unset picks the command's convention: reflective for displacement,
  /// periodic for limiting/tvd/mixing.
  std::optional<Boundary> boundary;
  /// "x,y" or "all"; unset means the bottom-center vertex (2^g, 0).
  std::optional<std::string> start;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> horizon;
  std::size_t empirical_horizon = kDefaultEmpiricalHorizon;
  std::vector<double> epsilons{0.1, 0.05, 0.02, 0.01};
  std::optional<FitWindow> window;
  std::string output_dir = ".";
  DenseMode dense = DenseMode::Auto;
  std::size_t dense_cap = kDefaultDenseCap;
  unsigned workers = 1;
  std::size_t bins = 40;

  Boundary effective_boundary() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Accepts a bare config object or a run manifest (uses its "config" key).
/// Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Throws ConfigError.
void validate(const ExperimentConfig& config);

/// Runs one command, writing CSVs and manifest.json into output_dir.
/// Returns the process exit code; progress and errors go to `log`.
int execute(const ExperimentConfig& config, std::ostream& log);

/// Entry point of the qwgasket tool.
int run(int argc, char** argv);

}  // namespace qwg::cli
