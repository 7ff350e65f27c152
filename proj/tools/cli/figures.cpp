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

#include <cmath>
#include <fstream>
#include <json.hpp>

#include "csv.hpp"
#include "dickesq/error.hpp"
#include "manifest.hpp"
#include "scenarios.hpp"

namespace dickesq::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing upstream output " + path.string());
  return json::parse(in);
}

// Copies selected columns, renaming headers; values pass through unchanged.
void project_columns(const CsvTable& t, const fs::path& path, const std::vector<std::pair<std::string, std::string>>& cols) {
  std::vector<std::string> header;
  std::vector<std::size_t> idx;
  for (const auto& [from, to] : cols) {
    idx.push_back(t.column(from));
    header.push_back(to);
  }
  CsvWriter w(path, header);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (std::size_t i : idx) cells.push_back(r.at(i));
    w.cells(cells);
  }
}

// Trajectory on a scaled time axis s * t.
void scaled_trajectory(const CsvTable& t, const fs::path& path, const std::string& axis, double scale,
                       const std::string& prefix = "") {
  const std::size_t tc = t.column("t");
  std::vector<std::string> header{axis};
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c != tc) header.push_back(prefix + t.header[c]);
  }
  CsvWriter w(path, header);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells{format_real(scale * std::stod(r.at(tc)))};
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c != tc) cells.push_back(r[c]);
    }
    w.cells(cells);
  }
}

}  // namespace

std::vector<std::string> emit_figure_data(const fs::path& dir) {
  const std::string scenario = read_manifest_scenario(dir);
  const fs::path fig = dir / "figures";
  fs::create_directories(fig);
  std::vector<std::string> out;
  auto emit = [&](const std::string& name) {
    out.push_back("figures/" + name);
    return fig / name;
  };

  if (scenario == "spectrum_scan") {
    const CsvTable t = read_csv(dir / "levels.csv");
    std::vector<std::pair<std::string, std::string>> cols{{"scan_value", "omega_c_over_omega_q"}};
    for (std::size_t c = 1; c < t.header.size(); ++c) cols.emplace_back(t.header[c], t.header[c]);
    project_columns(t, emit("fig2_levels.csv"), cols);
  } else if (scenario == "crossing_vs_N") {
    project_columns(read_csv(dir / "crossing_vs_N.csv"), emit("fig2_inset.csv"),
                    {{"n_atoms", "n_atoms"},
                     {"half_gap_numeric", "half_gap_numeric"},
                     {"half_gap_analytic", "half_gap_analytic"},
                     {"ratio", "ratio"}});
  } else if (scenario == "single_photon") {
    const json s = read_json(dir / "summary.json");
    const double rate = std::abs(s.at("exchange_rate").get<double>());
    scaled_trajectory(read_csv(dir / "trajectory.csv"), emit("fig3a.csv"), "omega_t", rate);
    if (fs::exists(dir / "analytic.csv")) {
      scaled_trajectory(read_csv(dir / "analytic.csv"), emit("fig3a_analytic.csv"), "omega_t", rate);
    }
  } else if (scenario == "pulse_drive" || scenario == "cw_drive") {
    const json s = read_json(dir / "summary.json");
    const double rate = s.at("exchange_rate").get<double>();
    const std::string name = scenario == "pulse_drive" ? "fig3b.csv" : "fig3c.csv";
    if (rate > 0.0) {
      scaled_trajectory(read_csv(dir / "trajectory.csv"), emit(name), "omega_t", rate);
    } else {
      scaled_trajectory(read_csv(dir / "trajectory.csv"), emit(name), "t", 1.0);
    }
  } else if (scenario == "meanfield_protocol") {
    const json s = read_json(dir / "summary.json");
    CsvWriter w(emit("fig4.csv"), {"series", "two_a_over_kappa", "t_chiN", "xi2", "xi2_dB"});
    for (const auto& run : s.at("runs")) {
      const CsvTable t = read_csv(dir / run.at("file").get<std::string>());
      const std::string ratio = format_real(run.at("two_a_over_kappa").get<double>());
      const std::size_t tc = t.column("t_chiN");
      for (const auto& [series, col, db] : {std::tuple{"ode", "xi2", "xi2_dB"},
                                           std::tuple{"analytic", "xi2_analytic", "xi2_analytic_dB"}}) {
        const std::size_t vc = t.column(col), dc = t.column(db);
        for (const auto& r : t.rows) w.cells({series, ratio, r.at(tc), r.at(vc), r.at(dc)});
      }
    }
  } else if (scenario == "stationary") {
    project_columns(read_csv(dir / "stationary.csv"), emit("stationary_floor.csv"),
                    {{"A_kappa", "A_kappa"}, {"xi2", "xi2"}, {"xi2_dB", "xi2_dB"}});
  } else if (scenario == "compare_scaling") {
    const CsvTable t = read_csv(dir / "scaling.csv");
    project_columns(t, emit("scaling.csv"), {{"quantity", "quantity"}, {"value", "value"}, {"dB", "dB"}});
  } else {
    throw ValidationError("figures: unsupported scenario '" + scenario + "' in manifest");
  }
  return out;
}

}  // namespace dickesq::cli
