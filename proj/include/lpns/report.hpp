#pragma once

// CSV and key=value report files. Numbers are written with 17 significant
// digits through std::to_chars, so output is locale independent and
// re-parses to the same doubles.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lpns/errors.hpp"
#include "lpns/ledger.hpp"

namespace lpns {

inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Shortest text that parses back to the same double.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(long v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }

class CsvWriter {
 public:
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

struct ReportLayout {
  std::vector<int> monitored_p;
  double m = 2.0;
};

inline std::vector<std::string> time_series_header(const ReportLayout& layout) {
  std::vector<std::string> h{"t", "step", "energy", "enstrophy", "transfer_defect"};
  for (int p : layout.monitored_p) {
    const std::string s = std::to_string(p);
    for (const char* name : {"band_e_", "band_d_", "g_", "b1inf_", "low_lm_"}) h.push_back(name + s);
  }
  return h;
}

inline std::string time_series_csv(const WindowLedger& ledger, const ReportLayout& layout) {
  CsvWriter w;
  w.row(time_series_header(layout));
  for (const auto& s : ledger.samples()) {
    std::vector<std::string> r{format_number(s.t), format_number(s.step), format_number(s.spectrum.energy),
                               format_number(s.spectrum.enstrophy), format_number(s.transfer_defect)};
    for (int p : layout.monitored_p) {
      r.push_back(format_number(s.spectrum.band_energy.at(p)));
      r.push_back(format_number(s.spectrum.band_enstrophy.at(p)));
      r.push_back(format_number(s.spectrum.low_grad_linf.at(p)));
      r.push_back(format_number(ledger.b1inf_series(p)(s)));
      r.push_back(format_number(s.spectrum.low_lp(layout.m, p)));
    }
    w.row(r);
  }
  return w.str();
}

inline const std::vector<std::string>& criteria_header() {
  static const std::vector<std::string> h{
      "p", "E_p", "D_p", "s_p", "bkm_p", "b1inf_p", "flux_window_lhs", "flux_window_rhs",
      "flux_window_ratio", "iteration_lhs", "iteration_rhs", "iteration_ratio", "resolved"};
  return h;
}

inline std::string criteria_csv(const CriterionReport& rep) {
  CsvWriter w;
  const auto& header = criteria_header();
  w.row(header);
  for (const auto& row : rep.rows) {
    std::vector<std::string> r{format_number(row.p), format_number(row.E),   format_number(row.D),
                               format_number(row.s), format_number(row.bkm), format_number(row.b1inf)};
    for (const auto& check : {row.flux_window, row.iteration}) {
      if (check) {
        r.push_back(format_number(check->lhs));
        r.push_back(format_number(check->rhs));
        r.push_back(format_number(check->ratio));
      } else {
        r.insert(r.end(), 3, std::string());
      }
    }
    r.push_back(row.resolved ? "1" : "0");
    w.row(r);
  }
  if (!rep.rows.empty()) {
    // Footer: fitted exponent, rms residual and number of bands in the fit.
    std::vector<std::string> footer{"alpha_fit"};
    footer.push_back(rep.alpha_fit.defined ? format_number(rep.alpha_fit.alpha) : std::string());
    footer.push_back(rep.alpha_fit.defined ? format_number(rep.alpha_fit.residual) : std::string());
    footer.push_back(format_number(rep.alpha_fit.points));
    footer.resize(header.size());
    w.row(footer);
  }
  return w.str();
}

inline std::string leray_monitor_csv(const CriterionReport& rep) {
  CsvWriter w;
  w.row({"t", "q", "value"});
  for (const auto& pt : rep.leray) w.row({format_number(pt.t), format_number(pt.q), format_number(pt.value)});
  return w.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

/// time_series.csv, criteria.csv and leray_monitor.csv under out_dir.
inline void write_report(const WindowLedger& ledger, const CriterionReport& rep, const ReportLayout& layout,
                         const std::filesystem::path& out_dir) {
  ensure_directory(out_dir);
  write_text_file(out_dir / "time_series.csv", time_series_csv(ledger, layout));
  write_text_file(out_dir / "criteria.csv", criteria_csv(rep));
  write_text_file(out_dir / "leray_monitor.csv", leray_monitor_csv(rep));
}

inline std::string key_value_text(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

/// Minimal CSV reader for numeric tables written by this module.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace lpns
