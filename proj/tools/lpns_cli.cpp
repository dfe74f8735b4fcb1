// lpns: run, analyze and verify entry points.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "lpns/config.hpp"
#include "lpns/driver.hpp"
#include "lpns/errors.hpp"
#include "lpns/verify.hpp"

namespace {

using namespace lpns;

struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    options.emplace_back(key, app->add_option(flag, values[key], help));
  }

  ConfigMap given() const {
    ConfigMap out;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) out[key] = values.at(key);
    }
    return out;
  }
};

int report_error(const std::exception& e, int code) {
  std::cerr << "lpns: " << e.what() << "\n";
  return code;
}

void print_summary(const RunOutcome& out) {
  std::cout << "samples: " << out.ledger.samples().size() << "  t_end: " << format_number(out.final_state.t) << "\n";
  if (out.report.alpha_fit.defined) {
    std::cout << "alpha_fit: " << format_number(out.report.alpha_fit.alpha)
              << "  residual: " << format_number(out.report.alpha_fit.residual) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Littlewood-Paley diagnostics for pseudo-spectral Navier-Stokes runs", "lpns"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "integrate a flow and record the window ledger");
  std::string run_config;
  run->add_option("--config", run_config, "flat key = value configuration file");
  FlagSet run_flags;
  for (const auto& key : config_keys()) run_flags.add(run, key, "override config key " + key);

  auto* analyze = app.add_subcommand("analyze", "rebuild the ledger from snapshots");
  std::string snap_dir, analyze_config;
  analyze->add_option("--snapshots", snap_dir, "directory of snapshot files")->required();
  analyze->add_option("--config", analyze_config, "flat key = value configuration file");
  FlagSet analyze_flags;
  for (const char* key : {"out_dir", "b", "c_bkm", "m", "p_min", "p_max", "t_ref", "alpha", "delta",
                          "linf_oversample"}) {
    analyze_flags.add(analyze, key, std::string("override config key ") + key);
  }
  analyze->get_option("--out-dir")->required();

  auto* verify = app.add_subcommand("verify", "run the identity and oracle checks");
  int verify_n = 8;
  std::uint64_t verify_seed = 2024;
  verify->add_option("--n", verify_n, "grid size")->check(CLI::IsMember({8, 16, 32}));
  verify->add_option("--seed", verify_seed, "seed of the random test fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      ConfigMap file = run_config.empty() ? ConfigMap{} : read_config_file(run_config);
      const RunConfig cfg = resolve_config(merge_config(std::move(file), run_flags.given()));
      const RunOutcome out = run_simulation(cfg);
      if (out.exit_code != kExitOk) {
        std::cerr << "lpns: " << out.message << "\n";
        return out.exit_code;
      }
      print_summary(out);
      return kExitOk;
    }
    if (*analyze) {
      ConfigMap file = analyze_config.empty() ? ConfigMap{} : read_config_file(analyze_config);
      const RunConfig cfg = resolve_config(merge_config(std::move(file), analyze_flags.given()));
      print_summary(analyze_snapshots(cfg, snap_dir));
      return kExitOk;
    }
    if (*verify) {
      const auto checks = run_verify_suite(verify_n, verify_seed);
      std::cout << format_verify_table(checks);
      for (const auto& c : checks) {
        if (!c.passed()) return kExitNumerical;
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    return report_error(e, kExitUsage);
  } catch (const IoError& e) {
    return report_error(e, kExitIo);
  } catch (const NumericalError& e) {
    return report_error(e, kExitNumerical);
  } catch (const std::exception& e) {
    return report_error(e, kExitUsage);
  }
  return kExitUsage;
}
