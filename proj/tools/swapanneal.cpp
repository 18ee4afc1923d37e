// Copyright 2026 The swapanneal Authors
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

// swapanneal command-line driver.

#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "swapanneal/experiments.hpp"

namespace {

using swapanneal::ExperimentConfig;
using swapanneal::RunResult;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

// Value flags shared by every subcommand; each maps to a config key.
constexpr Flag kFlags[] = {
    {"--model", "model", "Model kind(s): a, b, c, d (comma-separated)"},
    {"--dims", "dims", "Dimensions: N, LO..HI (doubling) or a comma list"},
    {"--delta", "delta", "Energy unit Delta (default 1)"},
    {"--dt", "dt", "Time step (default 0.01/Delta)"},
    {"--t-max", "t_max", "Flow horizon (default past t_c(0.99))"},
    {"--alphas", "alphas", "Alpha list for xi (default 1,2,3,4)"},
    {"--ms", "ms", "Network sizes m (default 16,32,64,128)"},
    {"--out", "out", "Output directory (default out)"},
    {"--seed", "seed", "Seed for randomized checks (default 0)"},
    {"--jobs", "jobs", "Concurrent jobs (default 1)"},
    {"--k-source", "k_source", "K matrix CSV used by xi (default OUT/K_m128.csv)"},
    {"--samples", "samples", "Random protocol samples in verify (default 200)"},
    {"--taylor-hph", "taylor_hph", "HPH coefficient checked by verify (default 2)"},
};

struct Command {
  const char* name;
  const char* help;
  RunResult (*run)(const ExperimentConfig&);
};

constexpr Command kCommands[] = {
    {"spectrum", "Write model spectra and spectral constants", swapanneal::run_spectrum},
    {"flow", "Tabulate the ground-state flow and its logistic bounds", swapanneal::run_flow},
    {"protocol", "Apply the two-system protocol to uniform states", swapanneal::run_protocol},
    {"schedule", "Build improved network schedules", swapanneal::run_schedule},
    {"coeffs", "Propagate deviation coefficients and test the scaling law",
     swapanneal::run_coeffs},
    {"xi", "Sweep the xi diagnostic over models, dims and alpha", swapanneal::run_xi},
    {"verify", "Run every oracle and convergence-order check", swapanneal::run_verify},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swapanneal: forward/backward interference annealing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", swapanneal::kVersion);

  std::map<std::string, std::string> values;
  std::string config_path;
  bool doubled = false;
  const Command* selected = nullptr;

  for (const auto& cmd : kCommands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    for (const auto& f : kFlags) sub->add_option(f.name, values[f.key], f.help);
    sub->add_option("--config", config_path, "key=value config file (flags win)");
    sub->add_flag("--double", doubled, "Use the doubled spectrum");
    sub->callback([&selected, &cmd] { selected = &cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : swapanneal::kExitInvalidInput;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::string text;
      try {
        text = swapanneal::read_file(config_path);
      } catch (const std::exception& e) {
        throw swapanneal::InputError(std::string("config: ") + e.what());
      }
      swapanneal::apply_config_text(cfg, text);
    }
    const CLI::App* sub = app.get_subcommands().front();
    for (const auto& f : kFlags)
      if (sub->count(f.name) > 0) swapanneal::apply_setting(cfg, f.key, values[f.key]);
    if (sub->count("--double") > 0) cfg.doubled = doubled;

    const RunResult r = selected->run(cfg);
    for (const auto& p : r.files) std::cout << p.generic_string() << '\n';
    (r.exit_code == 0 ? std::cout : std::cerr) << selected->name << ": " << r.message << '\n';
    return r.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swapanneal::kExitInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swapanneal::kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return swapanneal::kExitVerifyFailed;
  }
}
