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

#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "dickesq/error.hpp"
#include "dickesq/version.hpp"

namespace dickesq::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("SHA-256 computation failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
  nlohmann::ordered_json j;
  j["scenario"] = m.scenario;
  j["status"] = m.status;
  j["library_version"] = kVersion;
  j["config_path"] = m.config_path;
  j["config_sha256"] = m.config_sha256;
  j["preset"] = m.preset ? nlohmann::ordered_json(*m.preset) : nlohmann::ordered_json(nullptr);
  j["started_utc"] = m.started_utc;
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["outputs"] = m.outputs;
  j["warnings"] = m.warnings;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw ValidationError("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

std::string read_manifest_scenario(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) throw ValidationError("missing upstream output " + (dir / "manifest.json").string());
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    return j.at("scenario").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed manifest in " + dir.string() + ": " + e.what());
  }
}

}  // namespace dickesq::cli
