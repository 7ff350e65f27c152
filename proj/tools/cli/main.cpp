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

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "dickesq/error.hpp"
#include "manifest.hpp"
#include "scenarios.hpp"

#ifndef DICKESQ_PRESET_DIR
#define DICKESQ_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace dickesq;
using namespace dickesq::cli;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

std::string slurp(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + what + " " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path preset_path(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\.") != std::string::npos) {
    throw ValidationError("invalid preset name '" + name + "'");
  }
  const char* env = std::getenv("DICKESQ_PRESET_DIR");
  const fs::path dir = env != nullptr && *env != '\0' ? fs::path(env) : fs::path(DICKESQ_PRESET_DIR);
  const fs::path p = dir / (name + ".yaml");
  if (!fs::exists(p)) throw ValidationError("unknown preset '" + name + "' (looked for " + p.string() + ")");
  return p;
}

struct Request {
  std::string config;
  std::string out;
  std::string preset;
};

int run(const std::string& scenario, const Request& req) {
  const auto t0 = std::chrono::steady_clock::now();
  Manifest m;
  m.scenario = scenario;
  m.started_utc = utc_timestamp();
  fs::path out_dir;
  try {
    const std::string text = slurp(req.config, "config");
    std::optional<std::string> preset_text;
    std::string preset_origin;
    if (!req.preset.empty()) {
      const fs::path p = preset_path(req.preset);
      preset_text = slurp(p, "preset");
      preset_origin = p.string();
      m.preset = req.preset;
    }
    const ExperimentConfig cfg = parse_config(scenario, text, req.config, preset_text, preset_origin);
    m.config_path = req.config;
    m.config_sha256 = sha256_hex(text);
    out_dir = !req.out.empty() ? fs::path(req.out)
              : cfg.has("output", "directory") ? fs::path(cfg.text("output", "directory"))
                                               : fs::path("out") / scenario;
    fs::create_directories(out_dir);
    RunReport rep = run_scenario(cfg, out_dir);
    m.outputs = rep.outputs;
    m.warnings = rep.warnings;
    m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_dir, m);
    for (const auto& f : emit_figure_data(out_dir)) m.outputs.push_back(f);
    m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_dir, m);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << scenario << ": wrote " << m.outputs.size() << " files to " << out_dir.string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << scenario << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << scenario << ": " << e.what() << '\n';
    if (!out_dir.empty()) {
      m.status = std::string("numerical_failure: ") + e.what();
      m.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_manifest(out_dir, m);
    }
    return kExitNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << scenario << ": " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dickesq simulation driver"};
  app.require_subcommand(1);
  Request req;
  std::string scenario;
  for (const auto& name : scenario_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", req.config, "YAML experiment config")->required();
    sub->add_option("--out", req.out, "output directory");
    sub->add_option("--preset", req.preset, "named parameter preset layered under the config");
    sub->callback([&scenario, name] { scenario = name; });
  }
  std::string fig_dir;
  CLI::App* fig = app.add_subcommand("figures", "regenerate figure data for a completed run");
  fig->add_option("--out", fig_dir, "run output directory")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (fig->parsed()) {
    try {
      for (const auto& f : emit_figure_data(fig_dir)) std::cout << f << '\n';
      return 0;
    } catch (const ValidationError& e) {
      std::cerr << "error: figures: " << e.what() << '\n';
      return kExitValidation;
    }
  }
  return run(scenario, req);
}
