// freightneg: run negotiation grids, sweep c, replay transcripts, and
// recompute pairwise tests from an emitted results.csv.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "freightneg/harness.hpp"
#include "llm_command.hpp"

using namespace freightneg;

namespace {

struct GridFlags {
  std::string config_file;
  std::uint64_t seed = 7;
  std::size_t loads_per_cell = 50;
  std::size_t repetitions = 1;
  std::vector<double> spreads;
  std::vector<std::string> strategies;
  std::vector<std::string> carriers;
  std::vector<double> c_values;
  double c = 3.0;
  std::string shift_mode = "premium";
  unsigned threads = 0;
  std::string out = "results";
  bool large_scale = false;
};

void add_grid_flags(CLI::App* cmd, GridFlags& f) {
  cmd->add_option("--config", f.config_file,
                  "TOML config file; its values override flags")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--loads-per-cell", f.loads_per_cell, "loads per spread value");
  cmd->add_option("--repetitions", f.repetitions, "shift draws per load");
  cmd->add_option("--spreads", f.spreads, "full spread values in percent")
      ->delimiter(',');
  cmd->add_option("--strategies", f.strategies,
                  "boulware,linear,conceder,gtft,two-index")
      ->delimiter(',');
  cmd->add_option("--carriers", f.carriers,
                  "cooperative,hardliner,tft,deadline,anchoring")
      ->delimiter(',');
  cmd->add_option("--c", f.c, "calibration constant for two-index");
  cmd->add_option("--shift-mode", f.shift_mode, "premium or absolute");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--large-scale", f.large_scale, "350 loads per cell");
}

ExperimentConfig build_config(const GridFlags& f, bool sweep) {
  ExperimentConfig cfg =
      f.large_scale ? ExperimentConfig::large_scale() : ExperimentConfig::standard();
  cfg.master_seed = f.seed;
  if (!f.large_scale) cfg.loads_per_cell = f.loads_per_cell;
  cfg.repetitions = f.repetitions;
  cfg.protocol.calibration_constant = f.c;
  if (!f.spreads.empty()) cfg.spread_values = f.spreads;
  if (!f.strategies.empty()) {
    cfg.strategies.clear();
    for (const auto& s : f.strategies) cfg.strategies.push_back(StrategySpec::parse(s, f.c));
  } else {
    for (auto& s : cfg.strategies) {
      if (s.kind == StrategySpec::Kind::TwoIndex) s.c = f.c;
    }
  }
  if (!f.carriers.empty()) {
    cfg.carriers.clear();
    for (const auto& c : f.carriers) {
      cfg.carriers.push_back(CarrierParams::defaults(parse_carrier_kind(c)));
    }
  }
  if (sweep && !f.c_values.empty()) cfg.c_values = f.c_values;
  cfg.shift_mode = parse_shift_mode(f.shift_mode);
  cfg.threads = f.threads;
  cfg.output_dir = f.out;
  if (!f.config_file.empty()) apply_config_file(cfg, std::filesystem::path(f.config_file));
  cfg.validate();
  return cfg;
}

void print_overview(const GridResult& g) {
  fmt::print("{:<22} {:>9} {:>9} {:>7} {:>8}\n", "strategy", "agree", "savings",
             "rounds", "retract");
  for (const auto& s : g.strategies) {
    fmt::print("{:<22} {:>8.1f}% {:>9.3f} {:>7.2f} {:>8.3f}\n", s.label,
               100.0 * s.overall.agreement_rate.value, s.overall.mean_savings.value,
               s.overall.mean_rounds.value, s.overall.retraction_rate.value);
  }
}

int cmd_run(const GridFlags& f) {
  const ExperimentConfig cfg = build_config(f, false);
  const GridResult g = run_grid(cfg);
  emit_results(g, cfg, cfg.output_dir);
  print_overview(g);
  fmt::print("{} negotiations written to {}\n", g.transcripts.size(),
             cfg.output_dir.string());
  return 0;
}

int cmd_sweep(const GridFlags& f) {
  const ExperimentConfig cfg = build_config(f, true);
  const auto sweep = run_c_sweep(cfg);
  emit_sweep(sweep, cfg.output_dir);
  fmt::print("{:>4} {:>9} {:>9} {:>8}\n", "c", "agree", "savings", "retract");
  for (const auto& g : sweep) {
    const auto& m = g.strategies.front().overall;
    fmt::print("{:>4g} {:>8.1f}% {:>9.3f} {:>8.3f}\n", g.calibration_constant,
               100.0 * m.agreement_rate.value, m.mean_savings.value,
               m.retraction_rate.value);
  }
  return 0;
}

int cmd_replay(const std::string& path, std::size_t limit) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t checked = 0;
  std::size_t mismatched = 0;
  while (std::getline(in, line) && (limit == 0 || checked < limit)) {
    if (line.empty()) continue;
    const Transcript recorded = nlohmann::json::parse(line).get<Transcript>();
    const ReplayReport report = replay(recorded);
    ++checked;
    if (report.replayed_line != line) {
      ++mismatched;
      if (mismatched <= 5) {
        fmt::print(stderr, "mismatch on {} ({} vs {})\n", recorded.load.id,
                   recorded.strategy.key(), to_key(recorded.carrier.kind));
      }
    }
  }
  fmt::print("replayed {} transcripts, {} mismatches\n", checked, mismatched);
  return mismatched == 0 ? 0 : 1;
}

struct CsvRow {
  double value = 0.0;
  double ci = 0.0;
  std::size_t n = 0;
};

// Rebuilds sample variance from the emitted normal-approximation CI.
double variance_from_ci(const CsvRow& r) {
  const double se = r.ci / kZ975;
  return se * se * static_cast<double>(r.n);
}

int cmd_stats(const std::string& path, const std::string& baseline) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::map<std::pair<std::string, std::string>, CsvRow> overall;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::vector<std::string> cols;
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (cols.size() != 7 || cols[1] != "all" || cols[2] != "all") continue;
    overall[{cols[0], cols[3]}] = {std::stod(cols[4]), std::stod(cols[5]),
                                   static_cast<std::size_t>(std::stoull(cols[6]))};
  }
  if (!overall.count({baseline, "agreement_rate"})) {
    throw std::runtime_error("no aggregate rows for '" + baseline + "'");
  }
  fmt::print("{:<12} {:>10} {:>10} {:>10} {:>10}\n", "vs " + baseline, "z(agree)",
             "p", "t(savings)", "p");
  for (const auto& [key, row] : overall) {
    const auto& [strategy, metric] = key;
    if (strategy == baseline || metric != "agreement_rate") continue;
    const CsvRow& a = overall.at({baseline, "agreement_rate"});
    const auto k = [](const CsvRow& r) {
      return static_cast<std::size_t>(std::llround(r.value * r.n));
    };
    const StatTest z = two_prop_z(k(a), a.n, k(row), row.n);
    const CsvRow& sa = overall.at({baseline, "savings"});
    const CsvRow& sb = overall.at({strategy, "savings"});
    std::string t_text = "n/a";
    std::string p_text = "n/a";
    if (sa.n >= 2 && sb.n >= 2 && (sa.ci > 0.0 || sb.ci > 0.0)) {
      const StatTest t = welch_t(sa.value, variance_from_ci(sa), sa.n, sb.value,
                                 variance_from_ci(sb), sb.n);
      t_text = fmt::format("{:.3f}", t.statistic);
      p_text = fmt::format("{:.2e}", t.p_value);
    }
    fmt::print("{:<12} {:>10.3f} {:>10.2e} {:>10} {:>10}\n", strategy, z.statistic,
               z.p_value, t_text, p_text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-index negotiation engine and experiment harness"};
  app.require_subcommand(1);

  GridFlags run_flags;
  auto* run = app.add_subcommand("run", "run the strategy x carrier x spread grid");
  add_grid_flags(run, run_flags);

  GridFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep-c", "two-index sensitivity to c");
  add_grid_flags(sweep, sweep_flags);
  sweep->add_option("--c-values", sweep_flags.c_values, "values of c")
      ->delimiter(',');

  std::string replay_path;
  std::size_t replay_limit = 0;
  auto* rep = app.add_subcommand("replay", "re-run transcripts and compare bytes");
  rep->add_option("transcripts", replay_path, "transcripts.jsonl")->required();
  rep->add_option("--limit", replay_limit, "stop after this many (0: all)");

  std::string stats_path;
  std::string baseline = "two-index";
  auto* stats = app.add_subcommand("stats", "pairwise tests from results.csv");
  stats->add_option("results", stats_path, "results.csv")->required();
  stats->add_option("--baseline", baseline, "strategy key to compare against");

  llm::CliOptions llm_opts;
  auto* llm_cmd = app.add_subcommand("llm", "negotiate one load through a chat endpoint");
  llm::add_cli_options(llm_cmd, llm_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*rep) return cmd_replay(replay_path, replay_limit);
    if (*stats) return cmd_stats(stats_path, baseline);
    if (*llm_cmd) return llm::run_cli(llm_opts);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
