#pragma once

// Run configuration: flat `key = value` files, command-line overrides and
// validation. Resolution order is flag, then file, then default.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lpns/errors.hpp"
#include "lpns/grid.hpp"
#include "lpns/lp_bank.hpp"

namespace lpns {

using ConfigMap = std::map<std::string, std::string>;

struct RunConfig {
  int n = 32;
  double nu = 0.05;
  double t_end = 1.0;
  double dt = 1e-3;
  double cfl = 0.0;  // 0 keeps dt fixed; otherwise dt is the CFL cap
  std::string ic = "random";
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  double slope = -5.0 / 3.0;
  double k_peak = 4.0;
  int p_min = 0;
  int p_max = 3;
  int b = 2;
  double c_bkm = 16.0;
  double m = 2.0;
  double alpha = 1.5;
  double delta = 0.1;
  int sample_every = 1;
  int snapshot_every = 0;  // 0: first and final step only
  std::string out_dir = "lpns_out";
  int linf_oversample = 2;
  std::optional<double> t_ref;
};

/// Every recognised key, in the order used for echoing.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "n", "nu", "t_end", "dt", "cfl", "ic", "amplitude", "seed", "slope", "k_peak", "p_min",
      "p_max", "b", "c_bkm", "m", "alpha", "delta", "sample_every", "snapshot_every", "out_dir",
      "linf_oversample", "t_ref"};
  return keys;
}

inline bool is_config_key(const std::string& key) {
  for (const auto& k : config_keys()) {
    if (k == key) return true;
  }
  return false;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace detail

inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (!is_config_key(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError("config key '" + key + "' has no value");
    if (!out.emplace(key, value).second) throw ConfigError("config key '" + key + "' given twice");
  }
  return out;
}

inline ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Overlay `flags` on `file`; keys in flags win.
inline ConfigMap merge_config(ConfigMap file, const ConfigMap& flags) {
  for (const auto& [k, v] : flags) {
    if (!is_config_key(k)) throw ConfigError("unknown config key '" + k + "'");
    file[k] = v;
  }
  return file;
}

inline void validate(const RunConfig& c) {
  const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!is_power_of_two(c.n) || c.n < 8 || c.n > 512) fail("n must be a power of two in [8, 512]");
  if (!(c.nu > 0.0)) fail("nu must be positive");
  if (!(c.t_end >= 0.0)) fail("t_end must be >= 0");
  if (!(c.dt > 0.0)) fail("dt must be positive");
  if (!(c.cfl >= 0.0 && c.cfl <= 0.5)) fail("cfl must lie in [0, 0.5]");
  if (c.ic != "taylor_green" && c.ic != "random") fail("ic must be taylor_green or random");
  if (!(c.amplitude > 0.0)) fail("amplitude must be positive");
  if (!(c.k_peak > 0.0 && 3.0 * c.k_peak < c.n)) fail("k_peak must lie in (0, n/3)");
  const int q_max = DyadicFilterBank::q_max_for(Grid{c.n});
  if (c.p_min < 0 || c.p_min > c.p_max || c.p_max > q_max) {
    fail("need 0 <= p_min <= p_max <= " + std::to_string(q_max));
  }
  if (c.b < 1) fail("b must be >= 1");
  if (!(c.c_bkm > 0.0)) fail("c_bkm must be positive");
  if (!(c.m >= 2.0 && c.m <= 3.0)) fail("m must lie in [2, 3]");
  if (!(c.alpha > 0.0)) fail("alpha must be positive");
  if (!(c.delta > 0.0)) fail("delta must be positive");
  if (c.sample_every < 1) fail("sample_every must be >= 1");
  if (c.snapshot_every < 0) fail("snapshot_every must be >= 0");
  if (c.out_dir.empty()) fail("out_dir must not be empty");
  if (c.linf_oversample != 1 && c.linf_oversample != 2 && c.linf_oversample != 4) {
    fail("linf_oversample must be 1, 2 or 4");
  }
  const double sample_dt = c.sample_every * c.dt;
  const double limit = std::ldexp(1.0, -2 * c.p_max) / 8.0;
  if (sample_dt > limit * (1.0 + 1e-12)) {
    fail("sample interval " + std::to_string(sample_dt) + " exceeds 4^-p_max / 8 = " + std::to_string(limit));
  }
}

/// Defaults overlaid with `values`, then validated.
inline RunConfig resolve_config(const ConfigMap& values) {
  RunConfig c;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  using detail::parse_number;
  for (const auto& [k, v] : values) {
    if (!is_config_key(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  if (auto v = get("n")) c.n = parse_number<int>("n", *v);
  if (auto v = get("nu")) c.nu = parse_number<double>("nu", *v);
  if (auto v = get("t_end")) c.t_end = parse_number<double>("t_end", *v);
  if (auto v = get("dt")) c.dt = parse_number<double>("dt", *v);
  if (auto v = get("cfl")) c.cfl = parse_number<double>("cfl", *v);
  if (auto v = get("ic")) c.ic = *v;
  if (auto v = get("amplitude")) c.amplitude = parse_number<double>("amplitude", *v);
  if (auto v = get("seed")) c.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("slope")) c.slope = parse_number<double>("slope", *v);
  if (auto v = get("k_peak")) c.k_peak = parse_number<double>("k_peak", *v);
  if (auto v = get("p_min")) c.p_min = parse_number<int>("p_min", *v);
  if (auto v = get("p_max")) c.p_max = parse_number<int>("p_max", *v);
  if (auto v = get("b")) c.b = parse_number<int>("b", *v);
  c.c_bkm = std::ldexp(1.0, 2 * c.b);
  if (auto v = get("c_bkm")) c.c_bkm = parse_number<double>("c_bkm", *v);
  if (auto v = get("m")) c.m = parse_number<double>("m", *v);
  if (auto v = get("alpha")) c.alpha = parse_number<double>("alpha", *v);
  if (auto v = get("delta")) c.delta = parse_number<double>("delta", *v);
  if (auto v = get("sample_every")) c.sample_every = parse_number<int>("sample_every", *v);
  if (auto v = get("snapshot_every")) c.snapshot_every = parse_number<int>("snapshot_every", *v);
  if (auto v = get("out_dir")) c.out_dir = *v;
  if (auto v = get("linf_oversample")) c.linf_oversample = parse_number<int>("linf_oversample", *v);
  if (auto v = get("t_ref")) c.t_ref = parse_number<double>("t_ref", *v);
  validate(c);
  return c;
}

}  // namespace lpns
