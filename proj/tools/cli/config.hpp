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

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dickesq::cli {

enum class ValueType { real, integer, text, real_list, integer_list, boolean };

struct KeySpec {
  std::string key;
  ValueType type;
  bool required = false;
};

struct SectionSpec {
  std::string name;
  std::vector<KeySpec> keys;
  // Each inner vector is one complete alternative; at least one must be present.
  std::vector<std::vector<std::vector<std::string>>> alternatives;
};

struct ScenarioSchema {
  std::string scenario;
  std::vector<SectionSpec> sections;
};

const std::vector<std::string>& scenario_names();
const ScenarioSchema& schema_for(const std::string& scenario);

struct ConfigValue {
  std::string text;                 // scalar text, or empty for lists
  std::vector<std::string> items;   // list entries
  bool is_list = false;
  int line = 0;                     // 1-based source line, 0 for preset-supplied values
  std::string origin;               // file the value came from
};

// Validated configuration: only keys permitted by the scenario schema, with
// required keys present.
class ExperimentConfig {
 public:
  std::string scenario;
  std::string source_text;  // raw config text (hashed into the manifest)
  std::map<std::string, std::map<std::string, ConfigValue>> values;

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  double real(const std::string& section, const std::string& key) const;
  double real_or(const std::string& section, const std::string& key, double fallback) const;
  int integer(const std::string& section, const std::string& key) const;
  int integer_or(const std::string& section, const std::string& key, int fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  bool boolean_or(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& section, const std::string& key) const;
  std::vector<int> integers(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> reals_opt(const std::string& section, const std::string& key) const;
  std::optional<std::vector<int>> integers_opt(const std::string& section, const std::string& key) const;
  // "file:line: section.key" for diagnostics.
  std::string where(const std::string& section, const std::string& key) const;
};

// Parses a real number; also accepts multiples of pi such as "pi/6",
// "3*pi/4", "0.45*pi" or "-pi".
double parse_real(const std::string& text);

// Parses YAML text for a scenario, optionally layered over a preset (preset
// keys outside the scenario schema are ignored). Throws ValidationError with
// line/key diagnostics; all missing required keys are listed together.
ExperimentConfig parse_config(const std::string& scenario, const std::string& text, const std::string& origin,
                              const std::optional<std::string>& preset_text = std::nullopt,
                              const std::string& preset_origin = "preset");

}  // namespace dickesq::cli
