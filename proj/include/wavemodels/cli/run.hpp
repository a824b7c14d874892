// cli/run.hpp
// Run orchestration: integrate a RunConfig, evaluate diagnostics at the sample
// times, and persist the run directory.

#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wavemodels/cli/config.hpp"
#include "wavemodels/diagnostics.hpp"
#include "wavemodels/evolution.hpp"

namespace wavemodels::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitInvariant = 4,
  kExitEvent = 5,
};

struct RunOutcome {
  RunConfig config;
  Trajectory traj;
  std::vector<NormSeries> diagnostics;
  bool numeric_failure = false;
  std::string error;
  double wall_seconds = 0.0;
};

inline int exit_code(const RunOutcome& r) {
  if (r.numeric_failure) return kExitNumeric;
  switch (r.traj.stop.kind) {
    case StopKind::reached_tmax: return kExitOk;
    case StopKind::event: return kExitEvent;
    case StopKind::dt_underflow:
    case StopKind::max_steps: return kExitNumeric;
  }
  return kExitNumeric;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline double curve_length(const CurveState& c) {
  const SpectralField d1 = derivative(c.z1, 1);
  const SpectralField d2 = derivative(c.z2, 1);
  double acc = 0.0;
  for (std::size_t j = 0; j < d1.size(); ++j) acc += std::hypot(d1[j], d2[j]);
  return acc * c.grid().spacing();
}

inline std::vector<Event> make_events(const RunConfig& cfg, const PeriodicGrid& grid) {
  std::vector<Event> out;
  for (const auto& e : cfg.events) {
    const double x = e.threshold;
    switch (e.kind) {
      case EventKind::max_curvature:
        out.push_back({"max-curvature", [grid, x](double, const State& y) {
                         return max_curvature(curve_from_state(y, grid)) > x;
                       }});
        break;
      case EventKind::arc_chord:
        out.push_back({"arc-chord", [grid, x](double, const State& y) {
                         return arc_chord(curve_from_state(y, grid)) > x;
                       }});
        break;
      case EventKind::self_intersect:
        out.push_back({"self-intersect", [grid](double, const State& y) {
                         return self_intersects(curve_from_state(y, grid));
                       }});
        break;
    }
  }
  return out;
}

inline double sample_diagnostic(const std::string& label, const State& y, const PeriodicGrid& grid,
                                std::size_t count) {
  if (label == "max-curvature") return max_curvature(curve_from_state(y, grid));
  if (label == "arc-chord") return arc_chord(curve_from_state(y, grid));
  if (label == "length") return curve_length(curve_from_state(y, grid));
  const SpectralField first = unpack(y, grid, count).front();
  if (label == "l2") return sobolev_norm(first, 0.0);
  if (label == "h1") return sobolev_norm(first, 1.0);
  if (label == "mean") return first.mean();
  throw UsageError("no sampler for diagnostic '" + label + "'");
}

}  // namespace detail

/// Integrates cfg in memory. Numeric failures are captured in the outcome, not thrown.
inline RunOutcome execute(const RunConfig& cfg) {
  validate(cfg);
  RunOutcome out;
  out.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  const ModelId id = cfg.model_id();
  const PeriodicGrid grid = make_grid(static_cast<std::size_t>(cfg.n_nodes));
  const std::size_t count = field_count(id);
  const State y0 = initial_state(cfg);
  const Rhs rhs = with_krasny_filter(make_rhs(id, grid, cfg.params), grid, count, cfg.filter_level);
  try {
    out.traj = integrate(rhs, y0, 0.0, cfg.t_max, cfg.integrator, detail::make_events(cfg, grid), cfg.sample_every);
    for (const auto& label : cfg.diagnostics) {
      if (label == "wiener-strip") {
        out.diagnostics.push_back(strip_monitor(out.traj, grid, SpectralField(grid, y0)));
        continue;
      }
      NormSeries s{label, {}, {}};
      for (std::size_t i = 0; i < out.traj.times.size(); ++i) {
        s.push(out.traj.times[i], detail::sample_diagnostic(label, out.traj.states[i], grid, count));
      }
      out.diagnostics.push_back(std::move(s));
    }
  } catch (const NumericError& e) {
    out.numeric_failure = true;
    out.error = e.what();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Run directory for cfg: its output_dir, else $WAVEMODELS_OUTPUT_DIR/<name>, else runs/<name>.
inline fs::path resolve_output_dir(const RunConfig& cfg) {
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  const char* root = std::getenv("WAVEMODELS_OUTPUT_DIR");
  return fs::path(root && *root ? root : "runs") / cfg.name;
}

inline void write_snapshots(const RunOutcome& r, const fs::path& file) {
  const ModelId id = r.config.model_id();
  const PeriodicGrid grid = make_grid(static_cast<std::size_t>(r.config.n_nodes));
  const auto names = field_names(id);
  const std::size_t n = grid.size();
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error("cannot write " + file.string());
  os << "t," << (is_curve_model(id) ? "alpha" : "x");
  for (const auto& f : names) os << ',' << f;
  os << '\n';
  for (std::size_t i = 0; i < r.traj.times.size(); ++i) {
    const std::string t = format_double(r.traj.times[i]);
    const State& y = r.traj.states[i];
    for (std::size_t j = 0; j < n; ++j) {
      os << t << ',' << format_double(grid.node(j));
      for (std::size_t f = 0; f < names.size(); ++f) os << ',' << format_double(y[f * n + j]);
      os << '\n';
    }
  }
}

inline void write_diagnostics(const RunOutcome& r, const fs::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error("cannot write " + file.string());
  os << "t,label,value\n";
  // one row per sample time per norm, time-major
  std::map<double, std::vector<std::pair<std::string, double>>> rows;
  for (const auto& s : r.diagnostics) {
    for (std::size_t i = 0; i < s.size(); ++i) rows[s.times[i]].emplace_back(s.label, s.values[i]);
  }
  for (const auto& [t, entries] : rows) {
    for (const auto& [label, v] : entries) os << format_double(t) << ',' << label << ',' << format_double(v) << '\n';
  }
}

inline Json summary_json(const RunOutcome& r) {
  Json j;
  j["model"] = r.config.model;
  j["stop_reason"] = r.numeric_failure ? std::string("numeric_failure") : r.traj.stop.to_string();
  if (r.numeric_failure) j["error"] = r.error;
  j["final_time"] = r.traj.final_time;
  j["samples"] = r.traj.times.size();
  j["steps"] = {{"accepted", r.traj.stats.accepted},
                {"rejected", r.traj.stats.rejected},
                {"rhs_evals", r.traj.stats.rhs_evals}};
  j["wall_time_s"] = r.wall_seconds;
  j["exit_code"] = exit_code(r);
  Json fits = Json::object();
  for (const auto& s : r.diagnostics) {
    if (s.label == "mean" || s.size() < 2) continue;
    try {
      const DecayFit f = decay_fit(s, s.times.front(), s.times.back());
      fits[s.label] = {{"rate", f.rate}, {"r_squared", f.r_squared}};
    } catch (const FitError&) {
      fits[s.label] = nullptr;
    }
  }
  j["decay_fits"] = fits;
  return j;
}

/// Writes config.resolved.json, snapshots.csv, diagnostics.csv and summary.json into dir.
inline void write_run(const RunOutcome& r, const fs::path& dir) {
  fs::create_directories(dir);
  RunConfig resolved = r.config;
  resolved.output_dir = dir.string();
  {
    std::ofstream os(dir / "config.resolved.json", std::ios::binary);
    os << dump_resolved(resolved);
  }
  write_snapshots(r, dir / "snapshots.csv");
  write_diagnostics(r, dir / "diagnostics.csv");
  std::ofstream os(dir / "summary.json", std::ios::binary);
  os << summary_json(r).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

struct CompareRow {
  double t;
  std::string a;
  std::string b;
  double sup_diff;
};

struct CompareResult {
  std::vector<RunOutcome> runs;
  std::vector<CompareRow> table;
};

/// Snapshot file rows keyed by time, holding the h column in node order.
inline std::map<double, std::vector<double>> read_reference(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw UsageError("cannot read reference file " + file.string());
  std::string line;
  std::getline(is, line);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  }
  std::size_t hcol = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "h") hcol = i;
  }
  if (cols.empty() || cols[0] != "t" || hcol == cols.size()) {
    throw UsageError("reference file needs a header with t and h columns");
  }
  std::map<double, std::vector<double>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> v;
    for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
    if (v.size() != cols.size()) throw UsageError("ragged row in reference file");
    out[v[0]].push_back(v[hcol]);
  }
  return out;
}

namespace detail {

inline void require_comparable(const std::vector<RunConfig>& cfgs) {
  if (cfgs.empty()) throw UsageError("compare needs at least one config");
  for (const auto& c : cfgs) {
    const StateKind k = state_kind(c.model_id());
    if (k != StateKind::elevation_velocity && k != StateKind::elevation_vorticity) {
      throw UsageError("compare works on models with an elevation field h; " + c.model + " has none");
    }
  }
  const RunConfig& first = cfgs.front();
  const State h0 = initial_state(first);
  const std::size_t n = static_cast<std::size_t>(first.n_nodes);
  for (const auto& c : cfgs) {
    if (c.n_nodes != first.n_nodes) throw UsageError("incompatible grids: n_nodes differ");
    if (c.t_max != first.t_max || c.sample_every != first.sample_every) {
      throw UsageError("compared runs need the same t_max and sample_every");
    }
    const State y = initial_state(c);
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] != h0[j]) throw UsageError("compared runs need identical initial elevation");
    }
  }
}

inline double sup_diff(const State& a, const State& b, std::size_t n) {
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace detail

/// Runs every config (one worker each) and tabulates pairwise sup |h_a - h_b| at the common sample times.
/// A single config yields its self-comparison, a table of zeros.
inline CompareResult compare(const std::vector<RunConfig>& cfgs,
                             const std::map<double, std::vector<double>>* reference = nullptr) {
  detail::require_comparable(cfgs);
  std::vector<std::future<RunOutcome>> jobs;
  for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [c] { return execute(c); }));
  CompareResult res;
  for (auto& j : jobs) res.runs.push_back(j.get());

  const std::size_t n = static_cast<std::size_t>(cfgs.front().n_nodes);
  std::size_t common = res.runs.front().traj.times.size();
  for (const auto& r : res.runs) common = std::min(common, r.traj.times.size());
  auto label = [&](std::size_t i) { return std::to_string(i) + ":" + res.runs[i].config.model; };
  for (std::size_t s = 0; s < common; ++s) {
    const double t = res.runs.front().traj.times[s];
    if (res.runs.size() == 1) res.table.push_back({t, label(0), label(0), 0.0});
    for (std::size_t a = 0; a < res.runs.size(); ++a) {
      for (std::size_t b = a + 1; b < res.runs.size(); ++b) {
        res.table.push_back({t, label(a), label(b),
                             detail::sup_diff(res.runs[a].traj.states[s], res.runs[b].traj.states[s], n)});
      }
      if (reference) {
        const auto it = reference->find(t);
        if (it == reference->end()) continue;
        if (it->second.size() != n) throw UsageError("reference grid does not match the runs");
        res.table.push_back({t, label(a), "reference", detail::sup_diff(res.runs[a].traj.states[s], it->second, n)});
      }
    }
  }
  return res;
}

inline void write_compare(const CompareResult& res, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < res.runs.size(); ++i) {
    write_run(res.runs[i], dir / (std::to_string(i) + "-" + res.runs[i].config.model));
  }
  std::ofstream os(dir / "compare.csv", std::ios::binary);
  os << "t,a,b,sup_diff_h\n";
  for (const auto& r : res.table) os << format_double(r.t) << ',' << r.a << ',' << r.b << ',' << format_double(r.sup_diff) << '\n';
}

}  // namespace wavemodels::cli
