// Copyright 2026 The dickesq Authors
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

#include "config.hpp"

namespace dickesq::cli {

struct RunReport {
  std::vector<std::string> outputs;  // paths relative to the output directory
  std::vector<std::string> warnings;
};

// Runs one validated scenario, writing its primary outputs and summary.json.
RunReport run_scenario(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// Writes per-figure plot data under out_dir/figures from a completed run.
std::vector<std::string> emit_figure_data(const std::filesystem::path& out_dir);

}  // namespace dickesq::cli
