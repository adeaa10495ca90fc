#include <CLI11.hpp>
#include <exception>
#include <filesystem>
#include <iostream>

#include "qrl/cli/analyze.hpp"
#include "qrl/cli/config.hpp"
#include "qrl/cli/histories.hpp"
#include "qrl/cli/simulate.hpp"
#include "qrl/errors.hpp"
#include "qrl/verify/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ensemble simulator for hybrid quantum-classical learning agents"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run the agent ensembles described by a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  simulate->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Override run.seed");
  simulate->add_option("--out", out_dir, "Override output.dir");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suite = "all";
  std::uint64_t verify_seed = qrl::verify::VerifyOptions{}.seed;
  verify->add_option("--suite", suite, "amplify|theorem1|theorem2|theorem3|interval-laws|fig3|determinism|all")
      ->required();
  verify->add_option("--seed", verify_seed, "Master seed");

  auto* analyze = app.add_subcommand("analyze", "Summarize agents.csv files of a finished run");
  std::string in_dir;
  analyze->add_option("--in", in_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  auto* histories = app.add_subcommand("histories", "Exact and empirical rewarded-history distributions");
  std::string hist_config;
  std::size_t depth = 2;
  std::string hist_out = "histories";
  histories->add_option("--config", hist_config, "INI config file")->required()->check(CLI::ExistingFile);
  histories->add_option("--depth", depth, "Number of rewards per history")->capture_default_str();
  histories->add_option("--out", hist_out, "Output directory")->capture_default_str();

  auto* config = app.add_subcommand("config", "Configuration helpers");
  bool print_defaults = false;
  config->add_flag("--print-defaults", print_defaults, "Print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      qrl::cli::RunConfig cfg = qrl::cli::load_config(config_path);
      if (seed) cfg.run.seed = *seed;
      if (!out_dir.empty()) cfg.output.dir = out_dir;
      for (const auto& dir : qrl::cli::cmd_simulate(cfg, cfg.output.dir, qrl::cli::worker_count())) {
        std::cout << "wrote " << dir.string() << '\n';
      }
      return 0;
    }
    if (*verify) {
      qrl::verify::VerifyOptions opt;
      opt.seed = verify_seed;
      opt.workers = qrl::cli::worker_count();
      const bool ok = qrl::verify::run_suite(suite, opt, [](const qrl::stats::CheckResult& c) {
        std::cout << qrl::stats::format_check(c) << std::endl;
      });
      return ok ? 0 : 1;
    }
    if (*analyze) {
      qrl::cli::cmd_analyze(in_dir, std::cout);
      return 0;
    }
    if (*histories) {
      const auto r = qrl::cli::cmd_histories(qrl::cli::load_config(hist_config), depth, hist_out);
      for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
      if (r.incomplete) std::cout << "incomplete_agents=" << r.incomplete << '\n';
      return 0;
    }
    if (*config) {
      if (!print_defaults) {
        std::cerr << "nothing to do; try --print-defaults\n";
        return 2;
      }
      std::cout << qrl::cli::to_ini(qrl::cli::RunConfig{});
      return 0;
    }
  } catch (const qrl::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
