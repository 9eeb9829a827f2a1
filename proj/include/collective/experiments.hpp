#pragma once

// Parameter sweeps over the three models, with derived per-replication seeds
// and order-independent aggregation.
//
// Seed derivation (see random.hpp for derive_seed and tag):
//   ddd,    replication r:         derive_seed(master, {tag("ddd"), r, tag(stream)})
//           stream = "tendencies" | "network" | "vote"
//   ddd,    replication r, k:      derive_seed(master, {tag("ddd"), r, k, tag("mask")})
//   market, replication r, p:      derive_seed(master, {tag("market"), r, P, tag(stream)})
//           P = round(p * 1e6), stream = "knowledge" | "free-order" |
//           "incentive-order" | "incentive-coins"
// Grid coordinates rather than grid indices enter the seeds, so a point
// draws the same stream whatever grid it is part of.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "collective/condorcet.hpp"
#include "collective/ddd.hpp"
#include "collective/error.hpp"
#include "collective/market.hpp"
#include "collective/random.hpp"
#include "collective/trustnet.hpp"

namespace collective {

enum class Experiment { CondorcetSurface, DddSweep, MarketSweep, MarketExample };

inline std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::CondorcetSurface: return "condorcet";
    case Experiment::DddSweep: return "ddd";
    case Experiment::MarketSweep: return "market";
    case Experiment::MarketExample: return "market-example";
  }
  return "?";
}

enum class Figure { Fig2, Fig4, Fig5, Fig7, Fig8 };

inline Figure parse_figure(std::string_view text) {
  if (text == "fig2") return Figure::Fig2;
  if (text == "fig4") return Figure::Fig4;
  if (text == "fig5") return Figure::Fig5;
  if (text == "fig7") return Figure::Fig7;
  if (text == "fig8") return Figure::Fig8;
  throw ParameterError("unknown preset '" + std::string(text) + "' (expected fig2, fig4, fig5, fig7 or fig8)");
}

struct DddSettings {
  std::size_t citizens = 100;
  std::size_t m = 3;
  double beta = 32.0;
  bool reciprocal = true;
  long k_min = 1;
  long k_max = 100;
  long k_step = 1;
  double epsilon = 1.0 - 1e-9;
  std::size_t max_iter = 0;  // 0 selects 10 * citizens
};

struct MarketSettings {
  std::size_t citizens = 1000;
  std::size_t dims = 50;
  double p_min = 0.0;
  double p_max = 1.0;
  double p_step = 0.05;
  DistanceVariant variant = DistanceVariant::RootNormalized;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::CondorcetSurface;
  SurfaceSpec surface;
  TieRule tie_rule = TieRule::FairCoin;
  DddSettings ddd;
  MarketSettings market;
  std::size_t replications = 1000;
  std::size_t scale = 1;  // divides replications
  std::uint64_t master_seed = 0;
  unsigned threads = 0;   // 0 = hardware concurrency
  bool with_stderr = false;
  std::string output;     // empty = standard output

  /// ceil(replications / scale), at least 1.
  std::size_t effective_replications() const {
    return std::max<std::size_t>(1, (replications + scale - 1) / scale);
  }
};

/// Full-size configuration for a figure. `scale` only divides replications.
inline ExperimentConfig preset(Figure figure, std::size_t scale = 1) {
  ExperimentConfig cfg;
  cfg.scale = scale;
  switch (figure) {
    case Figure::Fig2:
      cfg.experiment = Experiment::CondorcetSurface;
      cfg.surface = SurfaceSpec{0.0, 1.0, 0.01, 1, 100};
      cfg.replications = 1;
      break;
    case Figure::Fig4:
    case Figure::Fig5:
      cfg.experiment = Experiment::DddSweep;
      cfg.ddd = DddSettings{};
      cfg.ddd.citizens = 100;
      cfg.ddd.k_min = 1;
      cfg.ddd.k_max = 100;
      cfg.ddd.k_step = 1;
      cfg.replications = 1000;
      break;
    case Figure::Fig7:
    case Figure::Fig8:
      cfg.experiment = Experiment::MarketSweep;
      cfg.market = MarketSettings{};
      cfg.market.citizens = 1000;
      cfg.market.dims = 50;
      cfg.replications = 1000;
      break;
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Settings by name (config files and CLI flags share this path).

namespace detail {

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  T value{};
  try {
    if constexpr (std::is_same_v<T, double>) {
      value = std::stod(s, &used);
    } else if constexpr (std::is_signed_v<T>) {
      value = static_cast<T>(std::stoll(s, &used));
    } else {
      require(!s.empty() && s.front() != '-', std::string(key) + ": expected a non-negative integer");
      value = static_cast<T>(std::stoull(s, &used));
    }
  } catch (const ParameterError&) {
    throw;
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), std::string(key) + ": cannot parse '" + s + "'");
  return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParameterError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

}  // namespace detail

/// Applies one `key = value` setting. Keys are the CLI long-flag names.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_number;
  const bool surface = cfg.experiment == Experiment::CondorcetSurface;
  if (key == "n-min") cfg.surface.n_min = parse_number<long>(key, value);
  else if (key == "n-max") cfg.surface.n_max = parse_number<long>(key, value);
  else if (key == "tie-rule") cfg.tie_rule = parse_tie_rule(value);
  else if (key == "p-min") (surface ? cfg.surface.p_min : cfg.market.p_min) = parse_number<double>(key, value);
  else if (key == "p-max") (surface ? cfg.surface.p_max : cfg.market.p_max) = parse_number<double>(key, value);
  else if (key == "p-step") (surface ? cfg.surface.p_step : cfg.market.p_step) = parse_number<double>(key, value);
  else if (key == "citizens") {
    const auto n = parse_number<std::size_t>(key, value);
    (cfg.experiment == Experiment::MarketSweep ? cfg.market.citizens : cfg.ddd.citizens) = n;
  }
  else if (key == "networks" || key == "reps" || key == "replications")
    cfg.replications = parse_number<std::size_t>(key, value);
  else if (key == "m") cfg.ddd.m = parse_number<std::size_t>(key, value);
  else if (key == "beta") cfg.ddd.beta = parse_number<double>(key, value);
  else if (key == "links") {
    if (value != "reciprocal" && value != "directed")
      throw ParameterError("links must be 'reciprocal' or 'directed', got '" + std::string(value) + "'");
    cfg.ddd.reciprocal = value == "reciprocal";
  }
  else if (key == "k-min") cfg.ddd.k_min = parse_number<long>(key, value);
  else if (key == "k-max") cfg.ddd.k_max = parse_number<long>(key, value);
  else if (key == "k-step") cfg.ddd.k_step = parse_number<long>(key, value);
  else if (key == "epsilon") cfg.ddd.epsilon = parse_number<double>(key, value);
  else if (key == "max-iter") cfg.ddd.max_iter = parse_number<std::size_t>(key, value);
  else if (key == "dims") cfg.market.dims = parse_number<std::size_t>(key, value);
  else if (key == "variant") cfg.market.variant = parse_distance_variant(value);
  else if (key == "seed") cfg.master_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "threads") cfg.threads = parse_number<unsigned>(key, value);
  else if (key == "scale") cfg.scale = parse_number<std::size_t>(key, value);
  else if (key == "with-stderr") cfg.with_stderr = detail::parse_bool(key, value);
  else if (key == "out") cfg.output = std::string(value);
  else throw ParameterError("unknown setting '" + std::string(key) + "'");
}

/// Plain-text `key = value` lines; blank lines and lines starting with '#'
/// are ignored.
inline std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in) {
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string{};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos,
                    "config line " + std::to_string(lineno) + ": expected 'key = value'");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    detail::require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

/// The resolved configuration as `key = value` lines, readable back through
/// parse_config_text.
inline std::string describe(const ExperimentConfig& cfg) {
  using detail::format_number;
  std::ostringstream os;
  os << "# experiment: " << to_string(cfg.experiment) << '\n';
  switch (cfg.experiment) {
    case Experiment::CondorcetSurface:
      os << "p-min = " << format_number(cfg.surface.p_min) << '\n'
         << "p-max = " << format_number(cfg.surface.p_max) << '\n'
         << "p-step = " << format_number(cfg.surface.p_step) << '\n'
         << "n-min = " << cfg.surface.n_min << '\n'
         << "n-max = " << cfg.surface.n_max << '\n'
         << "tie-rule = " << to_string(cfg.tie_rule) << '\n';
      break;
    case Experiment::DddSweep:
      os << "citizens = " << cfg.ddd.citizens << '\n'
         << "networks = " << cfg.replications << '\n'
         << "m = " << cfg.ddd.m << '\n'
         << "beta = " << format_number(cfg.ddd.beta) << '\n'
         << "links = " << (cfg.ddd.reciprocal ? "reciprocal" : "directed") << '\n'
         << "k-min = " << cfg.ddd.k_min << '\n'
         << "k-max = " << cfg.ddd.k_max << '\n'
         << "k-step = " << cfg.ddd.k_step << '\n'
         << "epsilon = " << format_number(cfg.ddd.epsilon) << '\n'
         << "max-iter = " << cfg.ddd.max_iter << '\n';
      break;
    case Experiment::MarketSweep:
      os << "citizens = " << cfg.market.citizens << '\n'
         << "dims = " << cfg.market.dims << '\n'
         << "reps = " << cfg.replications << '\n'
         << "p-min = " << format_number(cfg.market.p_min) << '\n'
         << "p-max = " << format_number(cfg.market.p_max) << '\n'
         << "p-step = " << format_number(cfg.market.p_step) << '\n'
         << "variant = " << to_string(cfg.market.variant) << '\n';
      break;
    case Experiment::MarketExample:
      break;
  }
  if (cfg.experiment == Experiment::DddSweep || cfg.experiment == Experiment::MarketSweep) {
    os << "scale = " << cfg.scale << '\n'
       << "# effective replications: " << cfg.effective_replications() << '\n'
       << "seed = " << cfg.master_seed << '\n'
       << "threads = " << cfg.threads << '\n'
       << "with-stderr = " << (cfg.with_stderr ? "true" : "false") << '\n';
  }
  if (!cfg.output.empty()) os << "out = " << cfg.output << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Execution.

/// Runs task(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; the first exception is rethrown.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(count);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Mean and standard error of a sample, accumulated in index order.
struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

inline Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    s.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return s;
}

inline std::vector<long> k_grid(const DddSettings& s) {
  detail::require(s.k_step > 0, "k step must be positive");
  detail::require(s.k_min >= 1 && s.k_max <= 100 && s.k_min <= s.k_max,
                  "k range must satisfy 1 <= k-min <= k-max <= 100");
  std::vector<long> ks;
  for (long k = s.k_min; k <= s.k_max; k += s.k_step) ks.push_back(k);
  return ks;
}

struct DddPoint {
  long k = 0;
  Summary e_tend_ddd;
  Summary e_tend_direct;
  Summary vote_agree_ddd;
  Summary vote_agree_direct;
  Summary residual;
  std::size_t resamples = 0;
};

/// One network per replication, shared across the k grid; a fresh activity
/// mask per (replication, k). The full-population reference, the DDD
/// outcome and the direct baseline all use the replication's vote seed.
inline std::vector<DddPoint> run_ddd_sweep(const ExperimentConfig& cfg) {
  const auto& s = cfg.ddd;
  const auto ks = k_grid(s);
  detail::require(s.citizens >= 2, "citizens must be at least 2");
  detail::require(s.m >= 1 && s.m < s.citizens, "m must satisfy 1 <= m < citizens");
  detail::require(s.beta >= 0.0, "beta must be non-negative");
  detail::require(s.epsilon > 0.0 && s.epsilon < 1.0, "epsilon must lie in (0, 1)");
  const std::size_t reps = cfg.effective_replications();
  const std::size_t nk = ks.size();
  constexpr std::size_t kStats = 5;
  std::vector<double> samples(reps * nk * kStats, 0.0);
  std::vector<std::size_t> resamples(reps * nk, 0);
  const std::uint64_t exp_tag = tag("ddd");

  parallel_for(reps, cfg.threads, [&](std::size_t r) {
    const auto pop = generate_tendencies(s.citizens, derive_seed(cfg.master_seed, {exp_tag, r, tag("tendencies")}));
    const auto net = generate_network(
        pop, {s.m, s.beta, derive_seed(cfg.master_seed, {exp_tag, r, tag("network")}), s.reciprocal});
    const std::uint64_t vote_seed = derive_seed(cfg.master_seed, {exp_tag, r, tag("vote")});
    const auto reference = full_population_reference(pop.x, vote_seed);
    for (std::size_t i = 0; i < nk; ++i) {
      const auto k = static_cast<std::uint64_t>(ks[i]);
      const auto mask = sample_activity(s.citizens, static_cast<double>(ks[i]),
                                        derive_seed(cfg.master_seed, {exp_tag, r, k, tag("mask")}));
      const auto state = propagate_vote_power(net, mask, {s.epsilon, s.max_iter});
      const auto ddd = weighted_outcome(pop.x, state.y, vote_seed);
      const auto direct = direct_baseline(pop.x, mask, vote_seed);
      double* out = &samples[(r * nk + i) * kStats];
      out[0] = tendency_error(reference.tendency, ddd.tendency);
      out[1] = tendency_error(reference.tendency, direct.tendency);
      out[2] = ddd.vote == reference.vote ? 1.0 : 0.0;
      out[3] = direct.vote == reference.vote ? 1.0 : 0.0;
      out[4] = state.residual;
      resamples[r * nk + i] = mask.resamples;
    }
  });

  std::vector<DddPoint> points(nk);
  std::vector<double> column(reps);
  for (std::size_t i = 0; i < nk; ++i) {
    auto stat = [&](std::size_t which) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = samples[(r * nk + i) * kStats + which];
      return summarize(column);
    };
    points[i].k = ks[i];
    points[i].e_tend_ddd = stat(0);
    points[i].e_tend_direct = stat(1);
    points[i].vote_agree_ddd = stat(2);
    points[i].vote_agree_direct = stat(3);
    points[i].residual = stat(4);
    for (std::size_t r = 0; r < reps; ++r) points[i].resamples += resamples[r * nk + i];
  }
  return points;
}

struct MarketPoint {
  double p = 0.0;
  // Indexed by DistanceVariant.
  Summary dist_free[2];
  Summary dist_incentive[2];
  Summary deci_free;
  Summary deci_incentive;
};

/// Both markets see the same knowledge matrix in a replication; their
/// orders and coins are drawn independently.
inline std::vector<MarketPoint> run_market_sweep(const ExperimentConfig& cfg) {
  const auto& s = cfg.market;
  detail::require(s.citizens >= 1, "citizens must be at least 1");
  detail::require(s.dims >= 1, "dims must be at least 1");
  const auto ps = probability_grid(s.p_min, s.p_max, s.p_step);
  const std::size_t reps = cfg.effective_replications();
  const std::size_t np = ps.size();
  constexpr std::size_t kStats = 6;
  std::vector<double> samples(reps * np * kStats, 0.0);
  const std::uint64_t exp_tag = tag("market");
  const auto env = environment(s.dims);

  parallel_for(reps * np, cfg.threads, [&](std::size_t task) {
    const std::size_t r = task / np;
    const std::size_t i = task % np;
    const auto p_tag = static_cast<std::uint64_t>(std::llround(ps[i] * 1e6));
    auto seed = [&](std::string_view stream) { return derive_seed(cfg.master_seed, {exp_tag, r, p_tag, tag(stream)}); };
    const auto know = generate_knowledge(s.citizens, s.dims, ps[i], seed("knowledge"));
    const auto free = run_incentive_free_market(know, seed("free-order"));
    const auto incentive = run_incentive_market(know, seed("incentive-order"), seed("incentive-coins"));
    double* out = &samples[task * kStats];
    out[0] = market_distance_error(free.m, env, DistanceVariant::RootNormalized);
    out[1] = market_distance_error(free.m, env, DistanceVariant::MeanSquared);
    out[2] = market_distance_error(incentive.m, env, DistanceVariant::RootNormalized);
    out[3] = market_distance_error(incentive.m, env, DistanceVariant::MeanSquared);
    out[4] = market_decision(free.m).correct ? 1.0 : 0.0;
    out[5] = market_decision(incentive.m).correct ? 1.0 : 0.0;
  });

  std::vector<MarketPoint> points(np);
  std::vector<double> column(reps);
  for (std::size_t i = 0; i < np; ++i) {
    auto stat = [&](std::size_t which) {
      for (std::size_t r = 0; r < reps; ++r) column[r] = samples[((r * np) + i) * kStats + which];
      return summarize(column);
    };
    auto& pt = points[i];
    pt.p = ps[i];
    pt.dist_free[static_cast<int>(DistanceVariant::RootNormalized)] = stat(0);
    pt.dist_free[static_cast<int>(DistanceVariant::MeanSquared)] = stat(1);
    pt.dist_incentive[static_cast<int>(DistanceVariant::RootNormalized)] = stat(2);
    pt.dist_incentive[static_cast<int>(DistanceVariant::MeanSquared)] = stat(3);
    pt.deci_free = stat(4);
    pt.deci_incentive = stat(5);
  }
  return points;
}

/// One output record: grid coordinates, summarized statistics and plain
/// counters.
struct SweepRow {
  std::vector<double> coords;
  std::vector<Summary> stats;
  std::vector<double> counters;
};

struct SweepTable {
  std::vector<std::string> coord_names;
  std::vector<std::string> stat_names;
  std::vector<std::string> counter_names;
  std::vector<SweepRow> rows;
};

inline SweepTable run_experiment(const ExperimentConfig& cfg) {
  SweepTable table;
  switch (cfg.experiment) {
    case Experiment::CondorcetSurface: {
      table.coord_names = {"p", "n"};
      table.stat_names = {"probability"};
      const auto grid = condorcet_surface(cfg.surface, cfg.tie_rule);
      for (std::size_t i = 0; i < grid.p_values.size(); ++i)
        for (std::size_t j = 0; j < grid.n_values.size(); ++j)
          table.rows.push_back({{grid.p_values[i], static_cast<double>(grid.n_values[j])},
                                {Summary{grid.at(i, j), 0.0, 1}},
                                {}});
      break;
    }
    case Experiment::DddSweep: {
      table.coord_names = {"k"};
      table.stat_names = {"e_tend_ddd", "e_tend_direct", "vote_agree_ddd", "vote_agree_direct", "mean_residual"};
      table.counter_names = {"resamples"};
      for (const auto& pt : run_ddd_sweep(cfg))
        table.rows.push_back({{static_cast<double>(pt.k)},
                              {pt.e_tend_ddd, pt.e_tend_direct, pt.vote_agree_ddd, pt.vote_agree_direct, pt.residual},
                              {static_cast<double>(pt.resamples)}});
      break;
    }
    case Experiment::MarketSweep: {
      table.coord_names = {"p"};
      table.stat_names = {"e_dist_free", "e_dist_incentive", "e_deci_free", "e_deci_incentive"};
      const int v = static_cast<int>(cfg.market.variant);
      for (const auto& pt : run_market_sweep(cfg))
        table.rows.push_back({{pt.p}, {pt.dist_free[v], pt.dist_incentive[v], pt.deci_free, pt.deci_incentive}, {}});
      break;
    }
    case Experiment::MarketExample: {
      table.coord_names = {"market"};
      table.stat_names = {"m_1", "m_2", "m_3", "e_dist_mean_squared", "e_dist_root_normalized"};
      const auto ex = worked_example();
      const auto env = environment(3);
      const MarketState states[2] = {run_incentive_free_market(ex.knowledge, ex.free_script),
                                     run_incentive_market(ex.knowledge, ex.incentive_script)};
      for (int which = 0; which < 2; ++which) {
        const auto& m = states[which].m;
        table.rows.push_back({{static_cast<double>(which)},
                              {Summary{m[0], 0.0, 1}, Summary{m[1], 0.0, 1}, Summary{m[2], 0.0, 1},
                               Summary{market_distance_error(m, env, DistanceVariant::MeanSquared), 0.0, 1},
                               Summary{market_distance_error(m, env, DistanceVariant::RootNormalized), 0.0, 1}},
                              {}});
      }
      break;
    }
  }
  return table;
}

/// Header plus one line per row, numbers at 12 significant digits. With
/// `with_stderr`, a `se_<stat>` column follows the regular columns for
/// every statistic.
inline void write_csv(std::ostream& out, const SweepTable& table, bool with_stderr = false) {
  std::string line;
  auto emit = [&](const std::string& cell) {
    if (!line.empty()) line += ',';
    line += cell;
  };
  for (const auto& c : table.coord_names) emit(c);
  for (const auto& c : table.stat_names) emit(c);
  for (const auto& c : table.counter_names) emit(c);
  if (with_stderr)
    for (const auto& c : table.stat_names) emit("se_" + c);
  out << line << '\n';
  for (const auto& row : table.rows) {
    line.clear();
    for (double v : row.coords) emit(detail::format_number(v));
    for (const auto& s : row.stats) emit(detail::format_number(s.mean));
    for (double v : row.counters) emit(detail::format_number(v));
    if (with_stderr)
      for (const auto& s : row.stats) emit(detail::format_number(s.std_error));
    out << line << '\n';
  }
}

}  // namespace collective
