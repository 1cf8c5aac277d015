#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freightneg/carrier.hpp"
#include "freightneg/metrics.hpp"
#include "freightneg/pricing.hpp"
#include "freightneg/protocol.hpp"
#include "freightneg/strategy.hpp"

namespace freightneg {

struct ExperimentConfig {
  std::vector<StrategySpec> strategies;
  std::vector<CarrierParams> carriers;
  std::vector<double> spread_values;
  std::size_t loads_per_cell = 50;
  std::size_t repetitions = 1;
  std::uint64_t master_seed = 7;
  std::vector<double> c_values;
  ProtocolConfig protocol;
  ShiftMode shift_mode = ShiftMode::Premium;
  ShiftGenParams shift_params;
  // Synthetic r_min is uniform on whole dollars in [low, high].
  int r_min_low = 1000;
  int r_min_high = 3000;
  unsigned threads = 0;  // 0: hardware concurrency
  std::filesystem::path output_dir = "results";

  // All five strategies and carriers over the twelve spread values, at
  // desk scale (50 loads per cell).
  static ExperimentConfig standard();
  // Same grid at 350 loads per cell.
  static ExperimentConfig large_scale();

  void validate() const;
  std::size_t negotiation_count() const;
};

// Applies a TOML/INI style config file on top of `config`. Recognized
// top-level keys: seed, loads_per_cell, repetitions, spreads, strategies,
// carriers, c, c_values, max_rounds, epsilon, shift_mode, shift_events,
// threads, out, r_min_low, r_min_high. Sections [carrier.<key>] and
// [gtft] override persona and tit-for-tat parameters.
void apply_config_file(ExperimentConfig& config, std::istream& input);
void apply_config_file(ExperimentConfig& config,
                       const std::filesystem::path& path);

// The synthetic load for (S, load index). Shared across repetitions.
Load generate_load(std::uint64_t master_seed, double full_spread_pct,
                   std::uint64_t load_index, int r_min_low = 1000,
                   int r_min_high = 3000);

std::uint64_t gtft_stream_key(std::uint64_t master_seed, double full_spread_pct,
                              std::uint64_t load_index, std::uint64_t repetition,
                              const StrategySpec& strategy);

struct CellKey {
  std::string strategy;
  std::string carrier;
  double spread_pct = 0.0;
};

struct CellResult {
  CellKey key;
  CellMetrics metrics;
  std::vector<NegotiationSummary> summaries;
};

struct StrategyAggregate {
  std::string key;
  std::string label;
  CellMetrics overall;
  std::map<std::string, CellMetrics> by_regime;
  std::map<std::string, CellMetrics> by_carrier;
  std::map<double, CellMetrics> by_spread;
};

struct PairwiseTests {
  std::string strategy;
  StatTest agreement;
  std::optional<StatTest> savings;
  std::optional<StatTest> rounds;
};

struct GridResult {
  double calibration_constant = 3.0;
  std::vector<CellResult> cells;
  std::vector<StrategyAggregate> strategies;
  std::vector<PairwiseTests> vs_two_index;
  // Canonical order: spread, load, repetition, strategy, carrier.
  std::vector<Transcript> transcripts;

  const StrategyAggregate* strategy(const std::string& key) const;
};

// Every (S, load, repetition) gets one load and one schedule, played by
// every strategy against every carrier. Output is identical for any
// thread count.
GridResult run_grid(const ExperimentConfig& config);

// Re-runs the two-index strategy once per c over the same loads and
// schedules.
std::vector<GridResult> run_c_sweep(const ExperimentConfig& config);

// Writes results.csv, summary.json, transcripts.jsonl, offer_curves.csv.
void emit_results(const GridResult& result, const ExperimentConfig& config,
                  const std::filesystem::path& output_dir);
void emit_sweep(const std::vector<GridResult>& sweep,
                const std::filesystem::path& output_dir);

std::string results_csv(const GridResult& result);
nlohmann::json summary_json(const GridResult& result,
                            const ExperimentConfig& config);

// Rebuilds a harness transcript from its replay key and checks that the
// re-run serializes to the same bytes.
struct ReplayReport {
  Transcript replayed;
  bool identical = false;
  std::string recorded_line;
  std::string replayed_line;
};
ReplayReport replay(const Transcript& recorded, int r_min_low = 1000,
                    int r_min_high = 3000);

std::string to_jsonl(const Transcript& transcript);

}  // namespace freightneg
