// dfock [run] <subcommand> [--config FILE] [--<key> VALUE ...]
//
// Every config key is also a flag (underscores become dashes). Flags are
// applied after the config file. Exit codes: 0 ok, 1 operational error,
// 2 a checked inequality failed.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfock/config.hpp"
#include "dfock/errors.hpp"
#include "dfock/runner.hpp"

namespace {

std::string flag_name(std::string key) {
  for (char& ch : key)
    if (ch == '_') ch = '-';
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front() == "run") args.erase(args.begin());

  CLI::App app{"Numerical checks for dominating sets in doubling Fock spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dfock 1.0");

  struct Sub {
    CLI::App* app;
    std::string config_path;
    std::map<std::string, std::string> values;
    bool print_config = false;
  };
  const std::map<std::string, std::string> about{
      {"covering", "greedy disk covering and coverage audit"},
      {"density", "relative density gamma of a region"},
      {"gamma-ladder", "sampling constant against gamma across a region family"},
      {"good-disks", "good-disk classification for random test functions"},
      {"growth", "doubling growth of rho and the fitted kappa"},
      {"harmonic", "local harmonic approximation error"},
      {"overlap", "overlap counts of dilated covering disks"},
      {"remez", "planar Remez ratios over degree and measure fraction"},
      {"rho", "scale function rho at a point"},
      {"sample", "empirical sampling constant of a region"},
      {"summability", "summability of rho^-m over a covering"},
      {"toeplitz", "Toeplitz invertibility against the level-set bound"},
  };
  std::map<std::string, Sub> subs;
  for (const std::string& name : dfock::subcommands()) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    s.app->add_option("--config", s.config_path, "key = value config file")->check(CLI::ExistingFile);
    s.app->add_flag("--print-config", s.print_config, "print the resolved config and exit");
    for (const std::string& key : dfock::config_keys()) {
      std::string names = "--" + flag_name(key);
      if (key == "n_max") names += ",--nmax";
      s.app->add_option(names, s.values[key], "config key " + key);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      dfock::RunConfig cfg = s.config_path.empty() ? dfock::RunConfig{} : dfock::load_config(s.config_path);
      for (const std::string& key : dfock::config_keys())
        if (s.app->count("--" + flag_name(key)) > 0) cfg.set_field(key, s.values[key]);
      if (s.print_config) {
        std::cout << cfg.serialize();
        return 0;
      }
      const dfock::RunOutcome outcome = dfock::run_subcommand(name, cfg);
      const std::string dir = dfock::resolve_output_dir(name, cfg);
      dfock::write_report(dir, outcome.report);
      std::cout << outcome.summary << "\n";
      std::cerr << "report: " << dir << "/report.json\n";
      for (const std::string& v : outcome.violations) std::cerr << "violation: " << v << "\n";
      return outcome.exit_code;
    } catch (const dfock::Error& e) {
      std::cerr << "error [" << dfock::to_string(e.kind()) << "]: " << e.detail() << "\n";
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
