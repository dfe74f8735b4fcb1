#pragma once

// The run and analyze pipelines behind the command-line tool.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fftw3.h>
#include <string>
#include <vector>

#include "lpns/config.hpp"
#include "lpns/errors.hpp"
#include "lpns/ic.hpp"
#include "lpns/ledger.hpp"
#include "lpns/report.hpp"
#include "lpns/snapshot.hpp"
#include "lpns/solver.hpp"

namespace lpns {

inline constexpr const char* kLpnsVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitIo = 3 };

inline LedgerSettings ledger_settings(const RunConfig& c) {
  LedgerSettings s;
  s.b = c.b;
  s.c_bkm = c.c_bkm;
  s.alpha = c.alpha;
  s.delta = c.delta;
  return s;
}

inline SampleOptions sample_options(const RunConfig& c) {
  SampleOptions o;
  o.stats.oversample = c.linf_oversample;
  o.stats.lebesgue_exponents = {2.0, 2.5, 3.0};
  if (std::find(o.stats.lebesgue_exponents.begin(), o.stats.lebesgue_exponents.end(), c.m) ==
      o.stats.lebesgue_exponents.end()) {
    o.stats.lebesgue_exponents.push_back(c.m);
  }
  return o;
}

inline ReportLayout report_layout(const RunConfig& c) {
  ReportLayout l;
  for (int p = c.p_min; p <= c.p_max; ++p) l.monitored_p.push_back(p);
  l.m = c.m;
  return l;
}

inline SpectralField initial_condition(const RunConfig& c) {
  const Grid g = make_grid(c.n);
  if (c.ic == "taylor_green") return ic_taylor_green(g, c.amplitude);
  return ic_random_spectrum(g, c.seed, c.slope, c.k_peak, c.amplitude);
}

inline std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%08ld.bin", step);
  return buf;
}

inline std::vector<std::pair<std::string, std::string>> run_meta_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> e{
      {"n", format_number(c.n)},
      {"nu", format_shortest(c.nu)},
      {"t_end", format_shortest(c.t_end)},
      {"dt", format_shortest(c.dt)},
      {"cfl", format_shortest(c.cfl)},
      {"ic", c.ic},
      {"amplitude", format_shortest(c.amplitude)},
      {"seed", std::to_string(c.seed)},
      {"slope", format_shortest(c.slope)},
      {"k_peak", format_shortest(c.k_peak)},
      {"p_min", format_number(c.p_min)},
      {"p_max", format_number(c.p_max)},
      {"b", format_number(c.b)},
      {"c_bkm", format_shortest(c.c_bkm)},
      {"m", format_shortest(c.m)},
      {"alpha", format_shortest(c.alpha)},
      {"delta", format_shortest(c.delta)},
      {"sample_every", format_number(c.sample_every)},
      {"snapshot_every", format_number(c.snapshot_every)},
      {"out_dir", c.out_dir},
      {"linf_oversample", format_number(c.linf_oversample)},
  };
  if (c.t_ref) e.emplace_back("t_ref", format_shortest(*c.t_ref));
  e.emplace_back("rng", CounterRng::name);
  e.emplace_back("lpns_version", kLpnsVersion);
  e.emplace_back("fftw_version", fftw_version);
  e.emplace_back("snapshot_version", std::to_string(kSnapshotVersion));
  return e;
}

struct RunOutcome {
  int exit_code = kExitOk;
  SolverState final_state;
  WindowLedger ledger;
  CriterionReport report;
  std::string message;
};

/// Integrate, sample on cadence, write snapshots and reports. A NaN ends the
/// run with exit code 2 after persisting the last finite state.
inline RunOutcome run_simulation(const RunConfig& c) {
  namespace fs = std::filesystem;
  const fs::path out_dir = c.out_dir;
  const fs::path snap_dir = out_dir / "snapshots";
  ensure_directory(snap_dir);
  write_text_file(out_dir / "run_meta.txt", key_value_text(run_meta_entries(c)));

  const DyadicFilterBank bank(make_grid(c.n));
  const SampleOptions opts = sample_options(c);
  RunOutcome out;
  out.ledger = WindowLedger(ledger_settings(c));
  SolverState s{initial_condition(c), 0.0, c.nu, 0};

  out.ledger.append(make_sample(s, bank, opts));
  write_snapshot(snap_dir / snapshot_name(0), s);

  const double eps = 1e-9 * c.dt;
  while (c.t_end - s.t > eps) {
    double h = c.cfl > 0.0 ? cfl_dt(s, c.cfl, c.dt) : c.dt;
    const bool last = c.t_end - s.t <= h + eps;
    if (last) h = c.t_end - s.t;
    SolverState next;
    try {
      next = step(s, h);
    } catch (const NumericalError& e) {
      write_snapshot(out_dir / "last_good.bin", s);
      out.exit_code = kExitNumerical;
      out.message = std::string(e.what()) + " at t = " + format_number(s.t);
      break;
    }
    s = std::move(next);
    if (last) s.t = c.t_end;
    if (last || s.step_count % c.sample_every == 0) out.ledger.append(make_sample(s, bank, opts));
    if (last || (c.snapshot_every > 0 && s.step_count % c.snapshot_every == 0)) {
      write_snapshot(snap_dir / snapshot_name(s.step_count), s);
    }
  }
  out.final_state = s;
  out.report = compute_criteria(out.ledger, c.p_min, c.p_max, c.m, c.t_ref);
  write_report(out.ledger, out.report, report_layout(c), out_dir);
  return out;
}

/// Rebuild the ledger from every snapshot in `snap_dir` and emit the reports.
inline RunOutcome analyze_snapshots(const RunConfig& c, const std::filesystem::path& snap_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(snap_dir)) throw IoError("snapshot directory " + snap_dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(snap_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no snapshots found in " + snap_dir.string());
  std::sort(files.begin(), files.end());

  std::vector<std::pair<SolverState, fs::path>> states;
  for (std::size_t i = 0; i < files.size(); ++i) {
    SolverState s = read_snapshot(files[i]);
    long step = long(i);
    const std::string stem = files[i].stem().string();
    if (stem.rfind("snapshot_", 0) == 0) {
      const std::string digits = stem.substr(9);
      const bool numeric = !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) {
        return ch >= '0' && ch <= '9';
      });
      if (numeric) step = std::stol(digits);
    }
    s.step_count = step;
    states.emplace_back(std::move(s), files[i]);
  }
  std::stable_sort(states.begin(), states.end(), [](const auto& a, const auto& b) { return a.first.t < b.first.t; });

  const int n = states.front().first.u.grid.n;
  RunConfig cfg = c;
  cfg.n = n;
  const int q_max = DyadicFilterBank::q_max_for(Grid{n});
  if (cfg.p_max > q_max) throw ConfigError("p_max exceeds the largest band " + std::to_string(q_max) + " of the snapshots");
  const DyadicFilterBank bank(make_grid(n));
  const SampleOptions opts = sample_options(cfg);
  RunOutcome out;
  out.ledger = WindowLedger(ledger_settings(cfg));
  for (const auto& [s, path] : states) {
    if (s.u.grid.n != n) throw IoError(path.string() + ": grid size differs from the other snapshots");
    if (!out.ledger.empty() && !(s.t > out.ledger.last_time())) {
      throw IoError(path.string() + ": duplicate snapshot time " + format_number(s.t));
    }
    out.ledger.append(make_sample(s, bank, opts));
  }
  out.final_state = states.back().first;
  out.report = compute_criteria(out.ledger, cfg.p_min, cfg.p_max, cfg.m, cfg.t_ref);
  ensure_directory(cfg.out_dir);
  write_report(out.ledger, out.report, report_layout(cfg), cfg.out_dir);
  return out;
}

}  // namespace lpns
