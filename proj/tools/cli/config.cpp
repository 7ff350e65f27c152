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

#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "dickesq/error.hpp"

namespace dickesq::cli {

namespace {

using VT = ValueType;

SectionSpec system_section(bool need_atoms, bool need_cavity, bool allow_cavity) {
  SectionSpec s{"system",
                {{"n_atoms", VT::integer, need_atoms},
                 {"omega_q", VT::real},
                 {"theta", VT::real},
                 {"delta", VT::real},
                 {"epsilon", VT::real},
                 {"g", VT::real, true}},
                {{{"omega_q", "theta"}, {"delta", "epsilon"}}}};
  if (!need_atoms) s.keys.erase(s.keys.begin());
  if (allow_cavity) s.keys.push_back({"omega_c", VT::text, need_cavity});
  return s;
}

SectionSpec output_section() {
  return {"output", {{"directory", VT::text}, {"general_xi2", VT::boolean}, {"state_dump", VT::boolean}}, {}};
}

SectionSpec ode_numerics(std::vector<KeySpec> extra) {
  extra.push_back({"rtol", VT::real});
  extra.push_back({"atol", VT::real});
  extra.push_back({"max_steps", VT::integer});
  return {"numerics", std::move(extra), {}};
}

std::vector<ScenarioSchema> build_schemas() {
  std::vector<ScenarioSchema> s;
  s.push_back({"spectrum_scan",
               {system_section(true, false, false),
                {"numerics",
                 {{"model", VT::text},
                  {"fock_cutoff", VT::integer},
                  {"n_levels", VT::integer},
                  {"scan_min", VT::real},
                  {"scan_max", VT::real},
                  {"scan_points", VT::integer},
                  {"crossing_pair", VT::integer_list}},
                 {}},
                output_section()}});
  s.push_back({"crossing_vs_N",
               {system_section(false, false, false),
                {"numerics",
                 {{"model", VT::text},
                  {"n_atoms_list", VT::integer_list},
                  {"fock_cutoff", VT::integer},
                  {"scan_min", VT::real},
                  {"scan_max", VT::real},
                  {"scan_points", VT::integer}},
                 {}},
                output_section()}});
  s.push_back({"single_photon",
               {system_section(true, false, true),
                {"single_photon", {{"varphi", VT::real, true}, {"bloch_angle", VT::real}}, {}},
                ode_numerics({{"model", VT::text},
                              {"initial", VT::text},
                              {"coupling", VT::real},
                              {"periods", VT::real},
                              {"n_samples", VT::integer},
                              {"fock_cutoff", VT::integer}}),
                output_section()}});
  const std::vector<KeySpec> drive_numerics{{"model", VT::text},       {"fock_cutoff", VT::integer},
                                            {"t_end", VT::real},       {"n_samples", VT::integer},
                                            {"snapshot_stride", VT::integer}};
  s.push_back({"pulse_drive",
               {system_section(true, true, true),
                {"dissipation", {{"kappa", VT::real, true}, {"gamma", VT::real, true}}, {}},
                {"drive",
                 {{"kind", VT::text},
                  {"amplitude", VT::real, true},
                  {"omega_d", VT::text, true},
                  {"width", VT::real},
                  {"center", VT::real}},
                 {}},
                ode_numerics(drive_numerics),
                output_section()}});
  s.push_back({"cw_drive",
               {system_section(true, true, true),
                {"dissipation", {{"kappa", VT::real, true}, {"gamma", VT::real, true}}, {}},
                {"drive", {{"kind", VT::text}, {"amplitude", VT::real, true}, {"omega_d", VT::text, true}}, {}},
                ode_numerics(drive_numerics),
                output_section()}});
  s.push_back({"meanfield_protocol",
               {{"bosonic",
                 {{"coupling", VT::real, true},
                  {"kappa", VT::real, true},
                  {"gamma", VT::real, true},
                  {"drive_amplitudes", VT::real_list, true},
                  {"detuning", VT::real}},
                 {}},
                ode_numerics({{"duration_chi", VT::real}, {"n_samples", VT::integer}}),
                output_section()}});
  s.push_back({"stationary",
               {{"bosonic",
                 {{"coupling", VT::real, true},
                  {"kappa", VT::real, true},
                  {"gamma", VT::real, true},
                  {"drive_amplitudes", VT::real_list, true}},
                 {}},
                {"numerics", {{"relaxation_check", VT::boolean}, {"relaxation_time", VT::real}}, {}},
                output_section()}});
  s.push_back({"compare_scaling",
               {system_section(true, false, false),
                {"bosonic",
                 {{"coupling", VT::real},
                  {"kappa", VT::real, true},
                  {"gamma", VT::real, true},
                  {"photon_number", VT::real, true}},
                 {}},
                output_section()}});
  return s;
}

const std::vector<ScenarioSchema>& schemas() {
  static const std::vector<ScenarioSchema> s = build_schemas();
  return s;
}

std::string location(const std::string& origin, int line) {
  std::ostringstream os;
  os << origin;
  if (line > 0) os << ':' << line;
  return os.str();
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

const KeySpec* find_key(const SectionSpec& sec, const std::string& key) {
  for (const auto& k : sec.keys) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

const SectionSpec* find_section(const ScenarioSchema& schema, const std::string& name) {
  for (const auto& s : schema.sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void check_scalar_type(const KeySpec& spec, const std::string& text, const std::string& where) {
  try {
    switch (spec.type) {
      case VT::real:
        parse_real(text);
        break;
      case VT::integer: {
        std::size_t pos = 0;
        (void)std::stoll(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing");
        break;
      }
      case VT::boolean:
        if (text != "true" && text != "false") throw std::invalid_argument("bool");
        break;
      default:
        break;
    }
  } catch (const std::exception&) {
    throw ValidationError(where + ": invalid value '" + text + "' for key '" + spec.key + "'");
  }
}

// Merges one YAML document into the value map.
void merge_document(const ScenarioSchema& schema, const YAML::Node& root, const std::string& origin, bool strict,
                    std::map<std::string, std::map<std::string, ConfigValue>>& values, std::string* declared) {
  if (!root || root.IsNull()) return;
  if (!root.IsMap()) throw ValidationError(location(origin, line_of(root)) + ": top level must be a mapping");
  for (const auto& item : root) {
    const std::string name = item.first.as<std::string>();
    const int line = line_of(item.first);
    if (name == "scenario") {
      if (declared != nullptr) *declared = item.second.as<std::string>();
      continue;
    }
    const SectionSpec* sec = find_section(schema, name);
    if (sec == nullptr) {
      if (!strict) continue;
      throw ValidationError(location(origin, line) + ": unknown or unused section '" + name + "' for scenario " +
                            schema.scenario);
    }
    if (!item.second.IsMap()) {
      throw ValidationError(location(origin, line) + ": section '" + name + "' must be a mapping");
    }
    for (const auto& kv : item.second) {
      const std::string key = kv.first.as<std::string>();
      const int kline = line_of(kv.first);
      const KeySpec* spec = find_key(*sec, key);
      if (spec == nullptr) {
        if (!strict) continue;
        throw ValidationError(location(origin, kline) + ": unknown key '" + key + "' in section '" + name + "'");
      }
      ConfigValue v;
      v.line = kline;
      v.origin = origin;
      const bool wants_list = spec->type == VT::real_list || spec->type == VT::integer_list;
      const std::string where = location(origin, kline);
      if (wants_list) {
        if (!kv.second.IsSequence()) throw ValidationError(where + ": key '" + key + "' expects a list");
        v.is_list = true;
        KeySpec elem{key, spec->type == VT::real_list ? VT::real : VT::integer};
        for (const auto& e : kv.second) {
          if (!e.IsScalar()) throw ValidationError(where + ": list '" + key + "' must hold scalars");
          check_scalar_type(elem, e.as<std::string>(), where);
          v.items.push_back(e.as<std::string>());
        }
        if (v.items.empty()) throw ValidationError(where + ": list '" + key + "' is empty");
      } else {
        if (!kv.second.IsScalar()) throw ValidationError(where + ": key '" + key + "' expects a scalar");
        v.text = kv.second.as<std::string>();
        check_scalar_type(*spec, v.text, where);
      }
      values[name][key] = std::move(v);
    }
  }
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : schemas()) n.push_back(s.scenario);
    return n;
  }();
  return names;
}

const ScenarioSchema& schema_for(const std::string& scenario) {
  for (const auto& s : schemas()) {
    if (s.scenario == scenario) return s;
  }
  throw ValidationError("unknown scenario '" + scenario + "' (expected one of: " + join(scenario_names(), ", ") + ")");
}

double parse_real(const std::string& raw) {
  std::string t;
  for (char c : raw) {
    if (c != ' ') t += c;
  }
  static const std::regex pi_form(R"(^([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\*)?([+-])?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?))?$)");
  std::smatch m;
  if (std::regex_match(t, m, pi_form)) {
    double v = std::numbers::pi;
    if (m[1].matched) {
      std::string f = m[1].str();
      f.pop_back();
      v *= std::stod(f);
    }
    if (m[2].matched && m[2].str() == "-") v = -v;
    if (m[3].matched) v /= std::stod(m[3].str());
    return v;
  }
  std::size_t pos = 0;
  const double v = std::stod(t, &pos);
  if (pos != t.size() || !std::isfinite(v)) throw std::invalid_argument("not a real number: " + raw);
  return v;
}

ExperimentConfig parse_config(const std::string& scenario, const std::string& text, const std::string& origin,
                              const std::optional<std::string>& preset_text, const std::string& preset_origin) {
  const ScenarioSchema& schema = schema_for(scenario);
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.source_text = text;
  try {
    if (preset_text) merge_document(schema, YAML::Load(*preset_text), preset_origin, false, cfg.values, nullptr);
    std::string declared;
    merge_document(schema, YAML::Load(text), origin, true, cfg.values, &declared);
    if (!declared.empty() && declared != scenario) {
      throw ValidationError(origin + ": config declares scenario '" + declared + "' but '" + scenario +
                            "' was requested");
    }
  } catch (const YAML::Exception& e) {
    throw ValidationError(origin + ":" + std::to_string(e.mark.line + 1) + ": YAML error: " + e.msg);
  }

  std::vector<std::string> missing;
  for (const auto& sec : schema.sections) {
    for (const auto& k : sec.keys) {
      if (k.required && !cfg.has(sec.name, k.key)) missing.push_back(sec.name + "." + k.key);
    }
    for (const auto& group : sec.alternatives) {
      bool satisfied = false;
      std::vector<std::string> described;
      for (const auto& alt : group) {
        bool all = true;
        for (const auto& key : alt) all = all && cfg.has(sec.name, key);
        satisfied = satisfied || all;
        described.push_back("{" + join(alt, ", ") + "}");
      }
      if (!satisfied) missing.push_back(sec.name + ".(" + join(described, " or ") + ")");
      // Mixing alternatives is ambiguous.
      int present = 0;
      for (const auto& alt : group) {
        bool any = false;
        for (const auto& key : alt) any = any || cfg.has(sec.name, key);
        present += any ? 1 : 0;
      }
      if (present > 1) {
        throw ValidationError(origin + ": section '" + sec.name + "' mixes alternatives " + join(described, " and "));
      }
    }
  }
  if (!missing.empty()) {
    throw ValidationError(origin + ": missing required keys for scenario " + scenario + ": " + join(missing, ", "));
  }
  return cfg;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  const auto s = values.find(section);
  return s != values.end() && s->second.count(key) > 0;
}

bool ExperimentConfig::has_section(const std::string& section) const { return values.count(section) > 0; }

std::string ExperimentConfig::where(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return section + "." + key;
  const ConfigValue& v = values.at(section).at(key);
  return location(v.origin, v.line) + ": " + section + "." + key;
}

double ExperimentConfig::real(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError("missing required key " + section + "." + key);
  return parse_real(values.at(section).at(key).text);
}

double ExperimentConfig::real_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? real(section, key) : fallback;
}

int ExperimentConfig::integer(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError("missing required key " + section + "." + key);
  const long long v = std::stoll(values.at(section).at(key).text);
  if (v < -2147483647LL || v > 2147483647LL) throw ValidationError(where(section, key) + ": integer out of range");
  return static_cast<int>(v);
}

int ExperimentConfig::integer_or(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

std::string ExperimentConfig::text(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError("missing required key " + section + "." + key);
  return values.at(section).at(key).text;
}

std::string ExperimentConfig::text_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

bool ExperimentConfig::boolean_or(const std::string& section, const std::string& key, bool fallback) const {
  return has(section, key) ? text(section, key) == "true" : fallback;
}

std::vector<double> ExperimentConfig::reals(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError("missing required key " + section + "." + key);
  std::vector<double> out;
  for (const auto& s : values.at(section).at(key).items) out.push_back(parse_real(s));
  return out;
}

std::vector<int> ExperimentConfig::integers(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError("missing required key " + section + "." + key);
  std::vector<int> out;
  for (const auto& s : values.at(section).at(key).items) out.push_back(std::stoi(s));
  return out;
}

std::optional<std::vector<double>> ExperimentConfig::reals_opt(const std::string& section,
                                                               const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return reals(section, key);
}

std::optional<std::vector<int>> ExperimentConfig::integers_opt(const std::string& section,
                                                               const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return integers(section, key);
}

}  // namespace dickesq::cli
