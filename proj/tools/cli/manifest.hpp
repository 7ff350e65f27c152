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
#include <optional>
#include <string>
#include <vector>

namespace dickesq::cli {

std::string sha256_hex(const std::string& data);

struct Manifest {
  std::string scenario;
  std::string config_path;
  std::string config_sha256;
  std::optional<std::string> preset;
  std::string started_utc;
  double wall_time_seconds = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  std::string status = "ok";
};

void write_manifest(const std::filesystem::path& dir, const Manifest& m);
std::string read_manifest_scenario(const std::filesystem::path& dir);
std::string utc_timestamp();

}  // namespace dickesq::cli
