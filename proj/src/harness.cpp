#include "freightneg/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "freightneg/rng.hpp"

namespace freightneg {

namespace {

constexpr std::array<std::string_view, 12> kLanes = {
    "Atlanta, GA",    "Chicago, IL",   "Dallas, TX",    "Denver, CO",
    "Memphis, TN",    "Columbus, OH",  "Phoenix, AZ",   "Savannah, GA",
    "Kansas City, MO", "Charlotte, NC", "Laredo, TX",    "Reno, NV"};

std::vector<CarrierParams> all_carriers() {
  std::vector<CarrierParams> carriers;
  for (auto kind : {CarrierKind::Cooperative, CarrierKind::Hardliner,
                    CarrierKind::TitForTat, CarrierKind::DeadlineExploiter,
                    CarrierKind::Anchoring}) {
    carriers.push_back(CarrierParams::defaults(kind));
  }
  return carriers;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t[]\"'");
    const auto e = item.find_last_not_of(" \t[]\"'");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<double> parse_doubles(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(std::stod(s));
  return out;
}

// Runs `work(i)` for i in [0, n) on a pool of workers pulling indices from
// a shared counter. Callers write results into slot i only.
template <typename Work>
void parallel_for(std::size_t n, unsigned threads, Work&& work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        work(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string spread_label(double s) { return fmt::format("{:g}", s); }

}  // namespace

ExperimentConfig ExperimentConfig::standard() {
  ExperimentConfig c;
  c.strategies = {StrategySpec::boulware(), StrategySpec::linear(),
                  StrategySpec::conceder(), StrategySpec::generous_tft(),
                  StrategySpec::two_index(c.protocol.calibration_constant)};
  c.carriers = all_carriers();
  c.spread_values = {1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 15, 20};
  c.c_values = {1, 2, 3, 4, 5, 6};
  return c;
}

ExperimentConfig ExperimentConfig::large_scale() {
  ExperimentConfig c = standard();
  c.loads_per_cell = 350;
  return c;
}

void ExperimentConfig::validate() const {
  protocol.validate();
  for (double s : spread_values) {
    if (!(s > 0.0)) throw std::invalid_argument("spread values must be positive");
  }
  for (const auto& carrier : carriers) carrier.validate();
  for (const auto& strategy : strategies) {
    if (strategy.kind == StrategySpec::Kind::GenerousTft) strategy.gtft.validate();
  }
  for (double c : c_values) {
    if (!(c > 0.0)) throw std::invalid_argument("c values must be positive");
  }
  if (r_min_low < 1 || r_min_high < r_min_low) {
    throw std::invalid_argument("bad r_min range");
  }
  if (shift_params.events < 0 ||
      shift_params.last_round >= protocol.max_rounds + 1) {
    throw std::invalid_argument("shift rounds must fall inside the deadline");
  }
}

std::size_t ExperimentConfig::negotiation_count() const {
  return strategies.size() * carriers.size() * spread_values.size() *
         loads_per_cell * repetitions;
}

void apply_config_file(ExperimentConfig& config, std::istream& input) {
  const auto items = CLI::ConfigTOML().from_config(input);
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::string joined;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      if (i) joined += ",";
      joined += item.inputs[i];
    }
    const std::string& name = item.name;
    const auto& parents = item.parents;

    if (parents.size() == 2 && parents[0] == "carrier") {
      const CarrierKind kind = parse_carrier_kind(parents[1]);
      bool found = false;
      for (auto& carrier : config.carriers) {
        if (carrier.kind == kind) {
          carrier.set(name, joined);
          found = true;
        }
      }
      if (!found) {
        throw std::invalid_argument("override for carrier not in the grid: " +
                                    parents[1]);
      }
      continue;
    }
    if (parents.size() == 1 && parents[0] == "gtft") {
      for (auto& s : config.strategies) {
        if (s.kind != StrategySpec::Kind::GenerousTft) continue;
        if (name == "stall_threshold_frac") {
          s.gtft.stall_threshold_frac = std::stod(joined);
        } else if (name == "generosity_frac") {
          s.gtft.generosity_frac = std::stod(joined);
        } else if (name == "generosity_prob") {
          s.gtft.generosity_prob = std::stod(joined);
        } else {
          throw std::invalid_argument("unknown gtft key '" + name + "'");
        }
      }
      continue;
    }
    if (!parents.empty()) {
      throw std::invalid_argument("unknown config section for key '" + name + "'");
    }

    if (name == "seed") {
      config.master_seed = std::stoull(joined);
    } else if (name == "loads_per_cell") {
      config.loads_per_cell = std::stoull(joined);
    } else if (name == "repetitions") {
      config.repetitions = std::stoull(joined);
    } else if (name == "spreads") {
      config.spread_values = parse_doubles(split_list(joined));
    } else if (name == "strategies") {
      config.strategies.clear();
      for (const auto& k : split_list(joined)) {
        config.strategies.push_back(
            StrategySpec::parse(k, config.protocol.calibration_constant));
      }
    } else if (name == "carriers") {
      std::vector<CarrierParams> carriers;
      for (const auto& k : split_list(joined)) {
        carriers.push_back(CarrierParams::defaults(parse_carrier_kind(k)));
      }
      config.carriers = std::move(carriers);
    } else if (name == "c") {
      config.protocol.calibration_constant = std::stod(joined);
      for (auto& s : config.strategies) {
        if (s.kind == StrategySpec::Kind::TwoIndex) {
          s.c = config.protocol.calibration_constant;
        }
      }
    } else if (name == "c_values") {
      config.c_values = parse_doubles(split_list(joined));
    } else if (name == "max_rounds") {
      config.protocol.max_rounds = std::stoi(joined);
    } else if (name == "epsilon") {
      config.protocol.retraction_epsilon = std::stod(joined);
    } else if (name == "shift_mode") {
      config.shift_mode = parse_shift_mode(split_list(joined).at(0));
    } else if (name == "shift_events") {
      config.shift_params.events = std::stoi(joined);
    } else if (name == "threads") {
      config.threads = static_cast<unsigned>(std::stoul(joined));
    } else if (name == "out") {
      config.output_dir = split_list(joined).at(0);
    } else if (name == "r_min_low") {
      config.r_min_low = std::stoi(joined);
    } else if (name == "r_min_high") {
      config.r_min_high = std::stoi(joined);
    } else {
      throw std::invalid_argument("unknown config key '" + name + "'");
    }
  }
}

void apply_config_file(ExperimentConfig& config,
                       const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  apply_config_file(config, in);
}

Load generate_load(std::uint64_t master_seed, double full_spread_pct,
                   std::uint64_t load_index, int r_min_low, int r_min_high) {
  Stream rng(stream_key(master_seed, full_spread_pct, load_index, 0,
                        Purpose::LoadGen));
  const auto r_min = rng.uniform_int(r_min_low, r_min_high);
  const auto origin = rng.uniform_int(0, kLanes.size() - 1);
  auto destination = rng.uniform_int(0, kLanes.size() - 2);
  if (destination >= origin) ++destination;
  return make_synthetic_load(
      Rate(static_cast<double>(r_min)), full_spread_pct,
      fmt::format("S{}-L{:04d}", spread_label(full_spread_pct), load_index),
      std::string(kLanes[origin]), std::string(kLanes[destination]));
}

std::uint64_t gtft_stream_key(std::uint64_t master_seed, double full_spread_pct,
                              std::uint64_t load_index, std::uint64_t repetition,
                              const StrategySpec& strategy) {
  return hash_combine(stream_key(master_seed, full_spread_pct, load_index,
                                 repetition, Purpose::Gtft),
                      hash_string(strategy.key()));
}

const StrategyAggregate* GridResult::strategy(const std::string& key) const {
  for (const auto& s : strategies) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

GridResult run_grid(const ExperimentConfig& config) {
  config.validate();
  struct Unit {
    double spread;
    std::uint64_t load_index;
    std::uint64_t repetition;
  };
  std::vector<Unit> units;
  for (double s : config.spread_values) {
    for (std::uint64_t l = 0; l < config.loads_per_cell; ++l) {
      for (std::uint64_t r = 0; r < config.repetitions; ++r) {
        units.push_back({s, l, r});
      }
    }
  }

  const std::size_t per_unit = config.strategies.size() * config.carriers.size();
  std::vector<std::vector<Transcript>> produced(units.size());
  parallel_for(units.size(), config.threads, [&](std::size_t i) {
    const Unit& u = units[i];
    const Load load = generate_load(config.master_seed, u.spread, u.load_index,
                                    config.r_min_low, config.r_min_high);
    const ShiftSchedule schedule = gen_shift_schedule(
        {u.spread, load.id, u.load_index, u.repetition}, config.master_seed,
        config.shift_params);
    auto& out = produced[i];
    out.reserve(per_unit);
    for (const auto& strategy : config.strategies) {
      for (const auto& carrier : config.carriers) {
        Stream gtft(gtft_stream_key(config.master_seed, u.spread, u.load_index,
                                    u.repetition, strategy));
        Transcript tr = run_negotiation(load, strategy, carrier, schedule,
                                        config.protocol, gtft, config.shift_mode);
        tr.replay = ReplayKey{config.master_seed, u.spread, u.load_index,
                              u.repetition};
        out.push_back(std::move(tr));
      }
    }
  });

  GridResult result;
  result.calibration_constant = config.protocol.calibration_constant;
  for (const auto& s : config.strategies) {
    if (s.kind == StrategySpec::Kind::TwoIndex) result.calibration_constant = s.c;
  }
  result.transcripts.reserve(units.size() * per_unit);
  for (auto& batch : produced) {
    for (auto& tr : batch) result.transcripts.push_back(std::move(tr));
  }

  // Cells in (spread, strategy, carrier) order.
  std::map<std::tuple<double, std::size_t, std::size_t>, std::vector<NegotiationSummary>>
      cell_samples;
  std::vector<std::vector<NegotiationSummary>> strat_all(config.strategies.size());
  std::vector<std::map<std::string, std::vector<NegotiationSummary>>> strat_regime(
      config.strategies.size());
  std::vector<std::map<std::string, std::vector<NegotiationSummary>>> strat_carrier(
      config.strategies.size());
  std::vector<std::map<double, std::vector<NegotiationSummary>>> strat_spread(
      config.strategies.size());
  std::vector<std::vector<double>> savings(config.strategies.size());
  std::vector<std::vector<double>> rounds(config.strategies.size());

  for (std::size_t u = 0; u < units.size(); ++u) {
    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
      for (std::size_t ci = 0; ci < config.carriers.size(); ++ci) {
        const Transcript& tr =
            result.transcripts[u * per_unit + si * config.carriers.size() + ci];
        const NegotiationSummary sum = summarize(tr);
        const double spread = units[u].spread;
        cell_samples[{spread, si, ci}].push_back(sum);
        strat_all[si].push_back(sum);
        strat_regime[si][to_string(classify_regime(spread))].push_back(sum);
        strat_carrier[si][to_key(config.carriers[ci].kind)].push_back(sum);
        strat_spread[si][spread].push_back(sum);
        if (sum.agreed) {
          savings[si].push_back(sum.savings);
          rounds[si].push_back(sum.rounds);
        }
      }
    }
  }

  for (double s : config.spread_values) {
    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
      for (std::size_t ci = 0; ci < config.carriers.size(); ++ci) {
        auto it = cell_samples.find({s, si, ci});
        if (it == cell_samples.end()) continue;
        CellResult cell;
        cell.key = {config.strategies[si].key(), to_key(config.carriers[ci].kind), s};
        cell.metrics = compute_metrics(it->second);
        cell.summaries = std::move(it->second);
        cell_samples.erase(it);
        result.cells.push_back(std::move(cell));
      }
    }
  }

  std::optional<std::size_t> two_index;
  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    StrategyAggregate agg;
    agg.key = config.strategies[si].key();
    agg.label = config.strategies[si].label();
    agg.overall = compute_metrics(strat_all[si]);
    for (auto& [k, v] : strat_regime[si]) agg.by_regime[k] = compute_metrics(v);
    for (auto& [k, v] : strat_carrier[si]) agg.by_carrier[k] = compute_metrics(v);
    for (auto& [k, v] : strat_spread[si]) agg.by_spread[k] = compute_metrics(v);
    result.strategies.push_back(std::move(agg));
    if (config.strategies[si].kind == StrategySpec::Kind::TwoIndex && !two_index) {
      two_index = si;
    }
  }

  if (two_index) {
    const std::size_t ti = *two_index;
    const auto agreed_count = [&](std::size_t si) { return savings[si].size(); };
    for (std::size_t si = 0; si < config.strategies.size(); ++si) {
      if (si == ti || strat_all[si].empty()) continue;
      PairwiseTests tests;
      tests.strategy = config.strategies[si].key();
      tests.agreement = two_prop_z(agreed_count(ti), strat_all[ti].size(),
                                   agreed_count(si), strat_all[si].size());
      try {
        tests.savings = welch_t(savings[ti], savings[si]);
      } catch (const std::invalid_argument&) {
      }
      try {
        tests.rounds = welch_t(rounds[ti], rounds[si]);
      } catch (const std::invalid_argument&) {
      }
      result.vs_two_index.push_back(std::move(tests));
    }
  }
  return result;
}

std::vector<GridResult> run_c_sweep(const ExperimentConfig& config) {
  if (config.c_values.empty()) throw std::invalid_argument("no c values to sweep");
  std::vector<GridResult> sweep;
  for (double c : config.c_values) {
    ExperimentConfig cfg = config;
    cfg.protocol.calibration_constant = c;
    cfg.strategies = {StrategySpec::two_index(c)};
    sweep.push_back(run_grid(cfg));
  }
  return sweep;
}

namespace {

void add_metric_rows(std::string& out, const std::string& strategy,
                     const std::string& carrier, const std::string& spread,
                     const CellMetrics& m) {
  auto row = [&](std::string_view metric, double value, double ci, std::size_t n) {
    out += fmt::format("{},{},{},{},{:.6f},{:.6f},{}\n", strategy, carrier,
                       spread, metric, value, ci, n);
  };
  row("agreement_rate", m.agreement_rate.value, m.agreement_rate.ci_half_width,
      m.agreement_rate.n);
  row("savings", m.mean_savings.value, m.mean_savings.ci_half_width,
      m.mean_savings.n);
  row("rounds", m.mean_rounds.value, m.mean_rounds.ci_half_width,
      m.mean_rounds.n);
  row("retraction_rate", m.retraction_rate.value,
      m.retraction_rate.ci_half_width, m.retraction_rate.n);
  row("hold_share", m.holds.share, m.n ? wald_ci(m.holds.share, m.n) : 0.0, m.n);
  row("holds_per_affected", m.holds.mean_per_affected, 0.0, m.holds.affected);
}

nlohmann::json metrics_json(const CellMetrics& m) {
  return {{"n", m.n},
          {"agree_pct", 100.0 * m.agreement_rate.value},
          {"agree_ci_pp", 100.0 * m.agreement_rate.ci_half_width},
          {"savings", m.mean_savings.value},
          {"savings_ci", m.mean_savings.ci_half_width},
          {"rounds", m.mean_rounds.value},
          {"rounds_ci", m.mean_rounds.ci_half_width},
          {"retractions", m.retraction_rate.value},
          {"hold_share", m.holds.share},
          {"holds_per_affected", m.holds.mean_per_affected},
          {"hold_affected_agree_pct", 100.0 * m.holds.affected_agreement_rate}};
}

nlohmann::json test_json(const StatTest& t) {
  nlohmann::json j{{"kind", t.kind == StatTest::Kind::WelchT ? "welch_t" : "two_prop_z"},
                   {"statistic", t.statistic},
                   {"p_value", t.p_value}};
  if (t.kind == StatTest::Kind::WelchT) j["df"] = t.df;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string results_csv(const GridResult& result) {
  std::string out = "strategy,carrier,spread_pct,metric,value,ci_half_width,n\n";
  for (const auto& cell : result.cells) {
    add_metric_rows(out, cell.key.strategy, cell.key.carrier,
                    spread_label(cell.key.spread_pct), cell.metrics);
  }
  for (const auto& s : result.strategies) {
    for (const auto& [regime, m] : s.by_regime) {
      add_metric_rows(out, s.key, "all", regime, m);
    }
    for (const auto& [carrier, m] : s.by_carrier) {
      add_metric_rows(out, s.key, carrier, "all", m);
    }
    add_metric_rows(out, s.key, "all", "all", s.overall);
  }
  return out;
}

nlohmann::json summary_json(const GridResult& result,
                            const ExperimentConfig& config) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : result.strategies) {
    nlohmann::json js = metrics_json(s.overall);
    js["key"] = s.key;
    js["label"] = s.label;
    for (const auto& [k, m] : s.by_regime) js["by_regime"][k] = metrics_json(m);
    for (const auto& [k, m] : s.by_carrier) js["by_carrier"][k] = metrics_json(m);
    for (const auto& [k, m] : s.by_spread) {
      js["by_spread"][spread_label(k)] = metrics_json(m);
    }
    strategies.push_back(std::move(js));
  }
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : result.vs_two_index) {
    nlohmann::json jt{{"strategy", t.strategy}, {"agreement", test_json(t.agreement)}};
    jt["savings"] = t.savings ? test_json(*t.savings) : nlohmann::json(nullptr);
    jt["rounds"] = t.rounds ? test_json(*t.rounds) : nlohmann::json(nullptr);
    tests.push_back(std::move(jt));
  }
  std::vector<std::string> carrier_keys;
  for (const auto& c : config.carriers) carrier_keys.push_back(to_key(c.kind));
  return {{"negotiations", result.transcripts.size()},
          {"calibration_constant", result.calibration_constant},
          {"config",
           {{"seed", config.master_seed},
            {"loads_per_cell", config.loads_per_cell},
            {"repetitions", config.repetitions},
            {"spreads", config.spread_values},
            {"carriers", carrier_keys},
            {"max_rounds", config.protocol.max_rounds},
            {"epsilon", config.protocol.retraction_epsilon},
            {"shift_mode", to_string(config.shift_mode)}}},
          {"strategies", std::move(strategies)},
          {"tests_vs_two_index", std::move(tests)}};
}

std::string to_jsonl(const Transcript& transcript) {
  return nlohmann::json(transcript).dump();
}

void emit_results(const GridResult& result, const ExperimentConfig& config,
                  const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  write_file(output_dir / "results.csv", results_csv(result));
  write_file(output_dir / "summary.json", summary_json(result, config).dump(2) + "\n");

  std::string lines;
  for (const auto& tr : result.transcripts) lines += to_jsonl(tr) + "\n";
  write_file(output_dir / "transcripts.jsonl", lines);

  // One representative load (index 0, repetition 0) per spread value.
  std::string curves =
      "strategy,carrier,spread_pct,load_id,t,broker_offer,broker_action,"
      "carrier_response,carrier_demand,target,shift_multiplier,case1_hold,"
      "tau,agreed\n";
  for (const auto& tr : result.transcripts) {
    if (!tr.replay || tr.replay->load_index != 0 || tr.replay->repetition != 0) {
      continue;
    }
    const bool agreed = tr.outcome.status == Status::Agreed;
    for (std::size_t i = 0; i < tr.rounds.size(); ++i) {
      const auto& r = tr.rounds[i];
      const bool last = i + 1 == tr.rounds.size();
      curves += fmt::format(
          "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", tr.strategy.key(),
          to_key(tr.carrier.kind), spread_label(tr.replay->full_spread_pct),
          tr.load.id, r.t, r.broker_offer.to_string(),
          r.offer_sent() ? "offer" : "accept",
          r.carrier_response ? to_string(*r.carrier_response) : "",
          r.carrier_demand ? r.carrier_demand->to_string() : "",
          r.target.to_string(),
          r.shift_applied ? fmt::format("{:.6f}", r.shift_applied->multiplier) : "",
          r.case1_hold ? 1 : 0, r.tau ? std::to_string(*r.tau) : "",
          agreed && last ? 1 : 0);
    }
  }
  write_file(output_dir / "offer_curves.csv", curves);
}

void emit_sweep(const std::vector<GridResult>& sweep,
                const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);
  std::string out = "c,scope,metric,value,ci_half_width,n\n";
  auto rows = [&](double c, const std::string& scope, const CellMetrics& m) {
    out += fmt::format("{:g},{},agreement_rate,{:.6f},{:.6f},{}\n", c, scope,
                       m.agreement_rate.value, m.agreement_rate.ci_half_width, m.n);
    out += fmt::format("{:g},{},savings,{:.6f},{:.6f},{}\n", c, scope,
                       m.mean_savings.value, m.mean_savings.ci_half_width,
                       m.mean_savings.n);
    out += fmt::format("{:g},{},rounds,{:.6f},{:.6f},{}\n", c, scope,
                       m.mean_rounds.value, m.mean_rounds.ci_half_width,
                       m.mean_rounds.n);
    out += fmt::format("{:g},{},retraction_rate,{:.6f},{:.6f},{}\n", c, scope,
                       m.retraction_rate.value, m.retraction_rate.ci_half_width, m.n);
  };
  for (const auto& g : sweep) {
    for (const auto& s : g.strategies) {
      rows(g.calibration_constant, "overall", s.overall);
      for (const auto& [k, m] : s.by_regime) rows(g.calibration_constant, k, m);
      for (const auto& [k, m] : s.by_carrier) rows(g.calibration_constant, k, m);
    }
  }
  write_file(output_dir / "c_sweep.csv", out);
}

ReplayReport replay(const Transcript& recorded, int r_min_low, int r_min_high) {
  if (!recorded.replay) {
    throw std::invalid_argument("transcript carries no replay key");
  }
  const ReplayKey& key = *recorded.replay;
  const Load load = generate_load(key.master_seed, key.full_spread_pct,
                                  key.load_index, r_min_low, r_min_high);
  Stream gtft(gtft_stream_key(key.master_seed, key.full_spread_pct,
                              key.load_index, key.repetition, recorded.strategy));
  ReplayReport report;
  report.replayed = run_negotiation(load, recorded.strategy, recorded.carrier,
                                    recorded.schedule, recorded.config, gtft,
                                    recorded.shift_mode);
  report.replayed.replay = key;
  report.recorded_line = to_jsonl(recorded);
  report.replayed_line = to_jsonl(report.replayed);
  report.identical = report.recorded_line == report.replayed_line;
  return report;
}

}  // namespace freightneg
