// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irscoop Authors
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

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irscoop/harness.hpp"
#include "irscoop/version.hpp"

namespace irscoop {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw OutputError(path.string() + ": bad number '" + s + "'");
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << text;
  if (!out) throw OutputError("write failed: " + path.string());
}

nlohmann::ordered_json stats_json(const Stats& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"stderr", s.stderr_},
          {"count", s.count}, {"failures", s.failures}};
}

const char* kPlotScript = R"PY(# Figures from the experiment CSVs in this directory.
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
LABELS = {
    "coop_irs": "cooperation, IRS",
    "indep_irs": "independent, IRS",
    "coop_no_irs": "cooperation, no IRS",
    "indep_no_irs": "independent, no IRS",
}


def means(name, field):
    acc = defaultdict(list)
    with open(os.path.join(HERE, name), newline="") as f:
        for row in csv.DictReader(f):
            if row["status"] == "optimal":
                acc[(row["scheme"], float(row["sweep_value"]))].append(float(row[field]))
    out = defaultdict(list)
    for (scheme, x), vals in sorted(acc.items()):
        out[scheme].append((x, sum(vals) / len(vals)))
    return out


def curve_figure(name, xlabel, png):
    fig, ax = plt.subplots(figsize=(5, 4))
    for scheme, pts in means(name, "min_rate").items():
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=LABELS.get(scheme, scheme))
    ax.set_xlabel(xlabel)
    ax.set_ylabel("throughput (bps/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, png), dpi=150)


def region_figure(name, png):
    r1 = means(name, "r1")
    r2 = means(name, "r2")
    fig, ax = plt.subplots(figsize=(5, 4))
    for scheme in r1:
        xs = [p[1] for p in r1[scheme]]
        ys = [p[1] for p in r2[scheme]]
        ax.plot(xs, ys, marker=".", label=LABELS.get(scheme, scheme))
    ax.set_xlabel("R1 (bps/Hz)")
    ax.set_ylabel("R2 (bps/Hz)")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, png), dpi=150)

)PY";

}  // namespace

std::string csv_header() {
  return "scheme,sweep_variable,sweep_value,realization,seed,status,min_rate,r1,r2,r_bar_star,"
         "gap,solve_time_s";
}

std::string format_row(const ResultRow& r) {
  std::string s = r.scheme + "," + r.sweep_variable + "," + num(r.sweep_value) + "," +
                  std::to_string(r.realization) + "," + std::to_string(r.seed) + "," + r.status +
                  "," + num(r.min_rate) + "," + num(r.r1) + "," + num(r.r2) + "," +
                  num(r.r_bar_star) + "," + num(r.gap) + ",";
  if (r.solve_time_s) s += num(*r.solve_time_s);
  return s;
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::string text = csv_header() + "\n";
  for (const ResultRow& r : table.rows) text += format_row(r) + "\n";
  write_file(path, text);
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw OutputError(path.string() + ": unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 12) throw OutputError(path.string() + ": expected 12 columns");
    ResultRow r;
    r.scheme = c[0];
    r.sweep_variable = c[1];
    r.sweep_value = parse_double(c[2], path);
    r.realization = std::stoi(c[3]);
    r.seed = std::stoull(c[4]);
    r.status = c[5];
    r.min_rate = parse_double(c[6], path);
    r.r1 = parse_double(c[7], path);
    r.r2 = parse_double(c[8], path);
    r.r_bar_star = parse_double(c[9], path);
    r.gap = parse_double(c[10], path);
    if (!c[11].empty()) r.solve_time_s = parse_double(c[11], path);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string csv_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SweepN: return "fig3_sweep_n.csv";
    case ExperimentKind::SweepD12: return "fig4_sweep_d12.csv";
    case ExperimentKind::RateRegion: return "fig5_rate_region.csv";
  }
  return "experiment.csv";
}

std::vector<std::filesystem::path> emit_outputs(const std::vector<ResultTable>& tables,
                                                const ExperimentConfig& config) {
  if (tables.empty()) throw OutputError("no result tables to write");
  const std::filesystem::path dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  nlohmann::ordered_json manifest;
  manifest["library"] = "irscoop";
  manifest["version"] = kVersion;
  manifest["config"] = dump_config(config);
  manifest["experiments"] = nlohmann::ordered_json::array();
  std::string plot = kPlotScript;

  for (const ResultTable& t : tables) {
    if (t.rows.empty()) throw OutputError(std::string("empty table for ") + to_string(t.kind));
    const std::filesystem::path csv = dir / csv_name(t.kind);
    write_csv(t, csv);
    written.push_back(csv);

    nlohmann::ordered_json e;
    e["name"] = to_string(t.kind);
    e["csv"] = csv.filename().string();
    e["rows"] = t.rows.size();
    e["failures"] = t.failures();
    e["groups"] = nlohmann::ordered_json::array();
    for (const GroupSummary& g : summarize(t)) {
      e["groups"].push_back({{"scheme", g.scheme},
                             {"sweep_value", g.sweep_value},
                             {"min_rate", stats_json(g.min_rate)},
                             {"r1", stats_json(g.r1)},
                             {"r2", stats_json(g.r2)}});
    }
    std::map<std::string, std::vector<double>> per_scheme;
    std::map<std::string, std::size_t> per_scheme_fail;
    for (const ResultRow& r : t.rows) {
      if (r.ok()) {
        per_scheme[r.scheme].push_back(r.min_rate);
      } else {
        ++per_scheme_fail[r.scheme];
      }
    }
    e["schemes"] = nlohmann::ordered_json::object();
    for (const auto& [s, vals] : per_scheme) {
      e["schemes"][s] = stats_json(compute_stats(vals, per_scheme_fail[s]));
    }
    if (t.kind == ExperimentKind::SweepN) {
      const std::string base = to_string(SchemeId::CoopWithIrs);
      e["gains_percent"] = nlohmann::ordered_json::object();
      for (SchemeId other : {SchemeId::IndepWithIrs, SchemeId::CoopNoIrs, SchemeId::IndepNoIrs}) {
        if (!per_scheme.count(base) || !per_scheme.count(to_string(other))) continue;
        const SweepGain g = sweep_gain(t, base, to_string(other));
        e["gains_percent"][std::string(base) + "_over_" + to_string(other)] = {
            {"mean_of_pointwise", g.mean_of_ratios}, {"of_averaged_curves", g.ratio_of_means}};
      }
      plot += "curve_figure(\"" + csv_name(t.kind) + "\", \"N\", \"fig3_sweep_n.png\")\n";
    } else if (t.kind == ExperimentKind::SweepD12) {
      plot += "curve_figure(\"" + csv_name(t.kind) + "\", \"d12 (m)\", \"fig4_sweep_d12.png\")\n";
    } else {
      plot += "region_figure(\"" + csv_name(t.kind) + "\", \"fig5_rate_region.png\")\n";
    }
    manifest["experiments"].push_back(e);
  }

  const std::filesystem::path mpath = dir / "manifest.json";
  write_file(mpath, manifest.dump(2) + "\n");
  written.push_back(mpath);
  const std::filesystem::path ppath = dir / "plot_figures.py";
  write_file(ppath, plot);
  written.push_back(ppath);
  return written;
}

}  // namespace irscoop
