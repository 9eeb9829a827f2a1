#pragma once

// Command-line front end. Exit codes: 0 success, 1 runtime failure,
// 2 bad arguments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collective/experiments.hpp"
#include "collective/market.hpp"
#include "collective/trustnet.hpp"

namespace collective::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

inline const char* kPresetHelp =
    "Presets:\n"
    "  fig2  majority-correct probability surface, p = 0..1 step 0.01, n = 1..100\n"
    "  fig4  DDD tendency error vs participation k = 1..100, 1000 networks x 100 citizens\n"
    "  fig5  DDD vote agreement vs participation (same run as fig4)\n"
    "  fig7  market distance error vs p, 1000 reps, d = 50, n = 1000\n"
    "  fig8  market decision correctness vs p (same run as fig7)\n"
    "Use --scale D to divide the replication count for quick runs.\n";

namespace detail {

/// Flag values captured as strings and applied through apply_setting, so CLI
/// flags and config-file lines go through one validation path.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    options.emplace_back(key, app->add_option("--" + key, values[key], help)->type_name("VALUE"));
  }
  void add_flag(CLI::App* app, const std::string& key, const std::string& help) {
    options.emplace_back(key, app->add_flag("--" + key, help));
  }
};

inline void add_run_flags(CLI::App* app, FlagSet& flags, std::string& config_path, std::string& preset_name) {
  app->add_option("--config", config_path, "Read `key = value` settings from FILE (flags override)");
  app->add_option("--preset", preset_name, "Start from a figure preset (fig2, fig4, fig5, fig7, fig8)");
  flags.add(app, "seed", "Master seed (random and printed when omitted)");
  flags.add(app, "threads", "Worker threads (0 = machine parallelism)");
  flags.add(app, "scale", "Divide replication counts by D");
  flags.add(app, "out", "Write CSV to FILE instead of standard output");
  flags.add_flag(app, "with-stderr", "Append se_* standard-error columns");
}

inline std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

inline void emit(const ExperimentConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
  file << text;
  file.close();
  if (!file) throw std::runtime_error("failed writing output file '" + cfg.output + "'");
}

inline std::string render_worked_example() {
  const auto ex = worked_example();
  const auto env = environment(3);
  const auto free = run_incentive_free_market(ex.knowledge, ex.free_script);
  const auto incentive = run_incentive_market(ex.knowledge, ex.incentive_script);
  std::ostringstream os;
  os << "citizens: c1 = [0.7, 0.5, 0.4], c2 = [0.5, 0.6, 0.3], c3 = [0.3, 0.5, 0.7]\n";
  auto report = [&](const char* name, const MarketState& st) {
    os << name << '\n';
    for (const auto& a : st.log) {
      os << "  c" << a.citizen + 1 << (a.participated ? " sets dimension " : " skips dimension ") << a.dimension + 1
         << " to " << collective::detail::format_number(a.value) << '\n';
    }
    os << "  final market: [";
    for (std::size_t j = 0; j < st.m.size(); ++j)
      os << (j ? ", " : "") << collective::detail::format_number(st.m[j]);
    char buf[128];
    std::snprintf(buf, sizeof buf, "]\n  error (mean-squared): %.3f\n  error (root-normalized): %.3f\n",
                  market_distance_error(st.m, env, DistanceVariant::MeanSquared),
                  market_distance_error(st.m, env, DistanceVariant::RootNormalized));
    os << buf;
  };
  report("incentive-free market", free);
  report("incentive market", incentive);
  return os.str();
}

}  // namespace detail

/// Parses argv, runs the selected subcommand and returns the exit code.
/// The resolved configuration is printed to `err` before every run.
inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  CLI::App app{"Collective decision-making simulations: jury majorities, vote-power delegation, decision markets",
               "collective"};
  app.footer(kPresetHelp);
  app.require_subcommand(1);

  detail::FlagSet flags;
  std::string config_path;
  std::string preset_name;

  auto* condorcet = app.add_subcommand("condorcet", "Majority-correct probability surface over (p, n)");
  flags.add(condorcet, "n-min", "Smallest jury size (default 1)");
  flags.add(condorcet, "n-max", "Largest jury size (default 100)");
  flags.add(condorcet, "p-min", "Smallest voter accuracy (default 0)");
  flags.add(condorcet, "p-max", "Largest voter accuracy (default 1)");
  flags.add(condorcet, "p-step", "Accuracy grid step (default 0.01)");
  flags.add(condorcet, "tie-rule", "Even-jury rule: fair-coin (default) or odd-only");
  detail::add_run_flags(condorcet, flags, config_path, preset_name);

  auto* ddd = app.add_subcommand("ddd", "Vote-power delegation vs direct democracy over participation k");
  flags.add(ddd, "citizens", "Citizens per network (default 100)");
  flags.add(ddd, "networks", "Generated networks, i.e. replications (default 1000)");
  flags.add(ddd, "m", "Trust links created per arriving citizen (default 3)");
  flags.add(ddd, "beta", "Assortativity exponent (default 32)");
  flags.add(ddd, "links", "Trust links: reciprocal (default) or directed");
  flags.add(ddd, "k-min", "Smallest participation percentage (default 1)");
  flags.add(ddd, "k-max", "Largest participation percentage (default 100)");
  flags.add(ddd, "k-step", "Participation step (default 1)");
  flags.add(ddd, "epsilon", "Absorbed-power target (default 1 - 1e-9)");
  flags.add(ddd, "max-iter", "Iteration cap per propagation (default 10 * citizens)");
  detail::add_run_flags(ddd, flags, config_path, preset_name);

  auto* market = app.add_subcommand("market", "Incentive-free vs incentive decision markets over p");
  flags.add(market, "citizens", "Citizens (default 1000)");
  flags.add(market, "dims", "Knowledge-space dimensions (default 50)");
  flags.add(market, "reps", "Replications per p (default 1000)");
  flags.add(market, "p-min", "Smallest population quality (default 0)");
  flags.add(market, "p-max", "Largest population quality (default 1)");
  flags.add(market, "p-step", "Quality grid step (default 0.05)");
  flags.add(market, "variant", "Distance error: root-normalized (default) or mean-squared");
  detail::add_run_flags(market, flags, config_path, preset_name);

  auto* example = app.add_subcommand("market-example", "Three-citizen worked market example");
  flags.add(example, "out", "Write the report to FILE instead of standard output");

  std::string figure_name;
  auto* preset_cmd = app.add_subcommand("preset", "Run a figure preset");
  preset_cmd->add_option("figure", figure_name, "fig2, fig4, fig5, fig7 or fig8")->required();
  flags.add(preset_cmd, "seed", "Master seed (random and printed when omitted)");
  flags.add(preset_cmd, "threads", "Worker threads (0 = machine parallelism)");
  flags.add(preset_cmd, "scale", "Divide replication counts by D");
  flags.add(preset_cmd, "out", "Write CSV to FILE instead of standard output");
  flags.add_flag(preset_cmd, "with-stderr", "Append se_* standard-error columns");

  auto* network = app.add_subcommand("network", "Generate one trust network and write its edge list");
  flags.add(network, "citizens", "Citizens (default 100)");
  flags.add(network, "m", "Trust links created per arriving citizen (default 3)");
  flags.add(network, "beta", "Assortativity exponent (default 32)");
  flags.add(network, "links", "Trust links: reciprocal (default) or directed");
  flags.add(network, "seed", "Master seed (random and printed when omitted)");
  flags.add(network, "out", "Write CSV to FILE instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();

  ExperimentConfig cfg;
  bool seed_given = false;
  try {
    if (name == "preset") {
      cfg = preset(parse_figure(figure_name));
    } else if (!preset_name.empty()) {
      cfg = preset(parse_figure(preset_name));
      const bool matches = (name == "condorcet" && cfg.experiment == Experiment::CondorcetSurface) ||
                           (name == "ddd" && cfg.experiment == Experiment::DddSweep) ||
                           (name == "market" && cfg.experiment == Experiment::MarketSweep);
      if (!matches) throw ParameterError("preset " + preset_name + " does not belong to subcommand " + name);
    } else if (name == "condorcet") {
      cfg.experiment = Experiment::CondorcetSurface;
    } else if (name == "ddd") {
      cfg.experiment = Experiment::DddSweep;
    } else if (name == "market") {
      cfg.experiment = Experiment::MarketSweep;
    } else if (name == "market-example") {
      cfg.experiment = Experiment::MarketExample;
    } else {
      cfg.experiment = Experiment::DddSweep;  // network reuses the ddd settings
    }

    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw ParameterError("cannot read config file '" + config_path + "'");
      for (const auto& [key, value] : parse_config_text(file)) {
        apply_setting(cfg, key, value);
        seed_given = seed_given || key == "seed";
      }
    }
    for (const auto& [key, option] : flags.options) {
      if (option->count() == 0) continue;
      apply_setting(cfg, key, option->get_expected_max() == 0 ? "true" : flags.values[key]);
      seed_given = seed_given || key == "seed";
    }
    if (cfg.scale == 0) throw ParameterError("scale must be at least 1");
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n\n" << (chosen ? chosen->help() : app.help());
    return kExitUsage;
  }

  if (!seed_given) cfg.master_seed = detail::random_seed();

  try {
    if (name == "market-example") {
      err << describe(cfg);
      detail::emit(cfg, detail::render_worked_example(), out);
      return kExitOk;
    }
    if (name == "network") {
      err << "# network\ncitizens = " << cfg.ddd.citizens << "\nm = " << cfg.ddd.m
          << "\nbeta = " << collective::detail::format_number(cfg.ddd.beta)
          << "\nlinks = " << (cfg.ddd.reciprocal ? "reciprocal" : "directed") << "\nseed = " << cfg.master_seed << '\n';
      const auto pop = generate_tendencies(cfg.ddd.citizens, derive_seed(cfg.master_seed, {tag("tendencies")}));
      const auto net = generate_network(
          pop, {cfg.ddd.m, cfg.ddd.beta, derive_seed(cfg.master_seed, {tag("network")}), cfg.ddd.reciprocal});
      std::ostringstream os;
      write_edge_list(os, net);
      detail::emit(cfg, os.str(), out);
      return kExitOk;
    }
    err << describe(cfg);
    const auto table = run_experiment(cfg);
    std::ostringstream os;
    write_csv(os, table, cfg.with_stderr);
    detail::emit(cfg, os.str(), out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace collective::cli
