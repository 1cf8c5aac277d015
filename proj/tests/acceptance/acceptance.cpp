// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fail.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/core.h>

#include "freightneg/harness.hpp"
#include "freightneg/llm/agents.hpp"

using namespace freightneg;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  fmt::print("[{}] {:>2}. {}: {}\n", v.pass ? "PASS" : "FAIL", id, name, v.detail);
  std::fflush(stdout);
}

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(FREIGHTNEG_TEST_DATA) + "/" + name, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b));
}

// Smallest tau >= 1 whose curve value reaches `last`, by direct scan.
std::int64_t scan_anchor(const ConcessionCurve& c, double last) {
  std::int64_t tau = 1;
  while (c.at(static_cast<double>(tau)) < last) ++tau;
  return tau;
}

// Random load with S spanning the three regimes and c spanning beta < 1,
// beta near 1 and beta > 1.
struct RandomCase {
  Load load;
  double c;
};

RandomCase random_case(Stream& rng) {
  const double r_min = static_cast<double>(rng.uniform_int(500, 5000));
  const double spread = rng.uniform(0.5, 30.0);
  return {make_synthetic_load(Rate(r_min), spread, "X"), rng.uniform(0.5, 8.0)};
}

std::vector<ShiftEvent> random_shifts(Stream& rng, int count, int max_rounds) {
  std::vector<int> rounds;
  for (int r = 2; r <= max_rounds; ++r) rounds.push_back(r);
  for (std::size_t i = rounds.size() - 1; i > 0; --i) {
    std::swap(rounds[i], rounds[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
  }
  rounds.resize(static_cast<std::size_t>(count));
  std::sort(rounds.begin(), rounds.end());
  std::vector<ShiftEvent> events;
  for (int r : rounds) {
    double m = rng.uniform(0.55, 1.45);
    if (std::fabs(m - 1.0) < 1e-3) m = 1.1;
    events.push_back({r, m});
  }
  return events;
}

const std::vector<CarrierParams>& all_carriers() {
  static const std::vector<CarrierParams> carriers = ExperimentConfig::standard().carriers;
  return carriers;
}

ExperimentConfig desk_grid() {
  ExperimentConfig c = ExperimentConfig::standard();
  c.threads = 0;
  return c;
}

// Two-index transcripts under multi-event schedules.
std::vector<Transcript> multi_shift_runs() {
  std::vector<Transcript> out;
  for (int events : {2, 3, 5}) {
    ExperimentConfig c = desk_grid();
    c.strategies = {StrategySpec::two_index(3.0)};
    c.shift_params.events = events;
    c.master_seed = 100 + static_cast<std::uint64_t>(events);
    auto g = run_grid(c);
    std::move(g.transcripts.begin(), g.transcripts.end(), std::back_inserter(out));
  }
  return out;
}

// Scripted carrier heard and answered at whole-cent resolution, the way
// the text channel carries it. An accepting reply states no demand.
class CentChannelCarrier final : public CarrierAgent {
 public:
  CentChannelCarrier(const CarrierParams& params, const Load& load, int max_rounds)
      : inner_(params, load, max_rounds) {}
  CarrierResponse respond(int round, Rate broker_offer) override {
    CarrierResponse r = inner_.respond(round, Rate(round_cents(broker_offer.value())));
    if (r.kind == CarrierResponse::Kind::Counter) {
      r.demand = Rate(round_cents(r.demand->value()));
    } else {
      r.demand.reset();
    }
    return r;
  }

 private:
  ScriptedCarrier inner_;
};

Transcript cent_channel_reference(const Load& load, const StrategySpec& strategy,
                                  const CarrierParams& params,
                                  const ShiftSchedule& schedule, std::uint64_t gtft_key) {
  const ProtocolConfig config;
  BrokerStrategy broker(strategy, load, config, Stream(gtft_key));
  CentChannelCarrier carrier(params, load, config.max_rounds);
  return negotiate(load, broker, carrier, schedule, config);
}

bool is_two_index(const Transcript& t) {
  return t.strategy.kind == StrategySpec::Kind::TwoIndex;
}

}  // namespace

int main() {
  const ExperimentConfig grid_config = desk_grid();
  fmt::print("running desk-scale grid ({} negotiations)\n", grid_config.negotiation_count());
  const GridResult grid = run_grid(grid_config);
  const std::vector<Transcript> multi = multi_shift_runs();
  ExperimentConfig sweep_config = desk_grid();
  sweep_config.c_values = {1, 2, 3, 4, 5, 6};
  const std::vector<GridResult> sweep = run_c_sweep(sweep_config);

  report(1, "monotone two-index offers under 1-5 shifts", [] {
    Stream rng(0xA11CE);
    const int cases = 100000;
    const int T = 10;
    long violations = 0;
    long over_target = 0;
    long holds = 0;
    for (int i = 0; i < cases; ++i) {
      auto [load, c] = random_case(rng);
      const auto events = random_shifts(rng, static_cast<int>(rng.uniform_int(1, 5)), T);
      TwoIndexState st = start_two_index(load, c, T);
      Load current = load;
      Rate prev;
      std::size_t next_event = 0;
      for (int t = 1; t <= T; ++t) {
        if (next_event < events.size() && events[next_event].round == t) {
          current = apply_shift(current, events[next_event++], ShiftMode::Premium);
          st = apply_shift_two_index(st, current.r_target, c, t);
        }
        const Rate o = next_two_index_offer(st, t);
        if (t > 1 && o < prev) ++violations;
        if (!st.hold_active && o > current.r_target) ++over_target;
        prev = o;
      }
      holds += st.hold_count > 0;
    }
    return Verdict{violations == 0 && over_target == 0,
                   fmt::format("{} cases, {} violations, {} over target, {} with holds",
                               cases, violations, over_target, holds)};
  });

  report(2, "zero two-index retractions", [&] {
    long grid_n = 0;
    long grid_r = 0;
    for (const auto& t : grid.transcripts) {
      if (!is_two_index(t)) continue;
      ++grid_n;
      grid_r += detect_retractions(t, t.config.retraction_epsilon);
    }
    long multi_r = 0;
    for (const auto& t : multi) multi_r += detect_retractions(t, t.config.retraction_epsilon);
    return Verdict{grid_n > 0 && grid_r == 0 && multi_r == 0,
                   fmt::format("grid {} negotiations / {} retractions; multi-shift {} / {}",
                               grid_n, grid_r, multi.size(), multi_r)};
  });

  report(3, "two-index offers bounded by the current target", [&] {
    long checked = 0;
    long bad = 0;
    auto scan = [&](const Transcript& t) {
      for (std::size_t i = 0; i < t.rounds.size(); ++i) {
        const RoundRecord& r = t.rounds[i];
        ++checked;
        if (r.case1_hold) {
          // Held offers stay at the last pre-shift value.
          if (i == 0 || r.broker_offer != t.rounds[i - 1].broker_offer) ++bad;
        } else if (r.broker_offer > r.target) {
          ++bad;
        }
      }
    };
    for (const auto& t : grid.transcripts) {
      if (is_two_index(t)) scan(t);
    }
    for (const auto& t : multi) scan(t);
    return Verdict{bad == 0, fmt::format("{} rounds, {} out of bounds", checked, bad)};
  });

  report(4, "no shifts reduces to the plain concession curve", [] {
    Stream rng(0xBEEF);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      auto [load, c] = random_case(rng);
      const int T = static_cast<int>(rng.uniform_int(3, 20));
      TwoIndexState st = start_two_index(load, c, T);
      const double beta = adaptive_beta(load.range() / load.r_min.value(), c);
      const ConcessionCurve plain{beta, load.r_min, load.r_target, T};
      for (int t = 1; t <= T; ++t) {
        const double a = next_two_index_offer(st, t).value();
        const double b = faratin_offer(plain, t).value();
        worst = std::max(worst, std::fabs(a - b) / b);
      }
    }
    return Verdict{worst <= 1e-9, fmt::format("10000 curves, max relative gap {:.3g}", worst)};
  });

  report(5, "anchor position equals a brute-force scan", [] {
    Stream rng(0xC0FFEE);
    long mismatches = 0;
    long on_grid = 0;
    for (int i = 0; i < 10000; ++i) {
      auto [load, c] = random_case(rng);
      const int T = static_cast<int>(rng.uniform_int(5, 15));
      const double beta = adaptive_beta(load.range() / load.r_min.value(), c);
      const ConcessionCurve curve{beta, load.r_min, load.r_target, T};
      double last;
      if (i % 2 == 0) {
        // Exactly on a curve point, where rounding in pow() bites.
        last = curve.at(static_cast<double>(rng.uniform_int(1, T)));
        ++on_grid;
      } else {
        last = rng.uniform(load.r_min.value(), load.r_target.value());
      }
      if (anchor_position(curve, Rate(last)) != scan_anchor(curve, Rate(last).value())) {
        ++mismatches;
      }
    }
    return Verdict{mismatches == 0, fmt::format("10000 cases ({} on curve points), {} mismatches",
                                                on_grid, mismatches)};
  });

  report(6, "controlled comparison", [&] {
    std::map<std::tuple<double, std::uint64_t, std::uint64_t>, std::uint64_t> hashes;
    long hash_mismatch = 0;
    for (const auto& t : grid.transcripts) {
      const auto key = std::make_tuple(t.replay->full_spread_pct, t.replay->load_index,
                                       t.replay->repetition);
      const auto [it, fresh] = hashes.emplace(key, t.schedule.hash());
      if (!fresh && it->second != t.schedule.hash()) ++hash_mismatch;
    }
    ExperimentConfig one = grid_config;
    one.threads = 1;
    ExperimentConfig many = grid_config;
    many.threads = 8;
    const GridResult a = run_grid(one);
    const GridResult b = run_grid(many);
    bool same = results_csv(a) == results_csv(b) && results_csv(a) == results_csv(grid) &&
                a.transcripts.size() == b.transcripts.size();
    for (std::size_t i = 0; same && i < a.transcripts.size(); ++i) {
      same = to_jsonl(a.transcripts[i]) == to_jsonl(b.transcripts[i]);
    }
    return Verdict{hash_mismatch == 0 && same,
                   fmt::format("{} schedule keys, {} hash mismatches; 1 vs 8 threads {}",
                               hashes.size(), hash_mismatch, same ? "identical" : "differ")};
  });

  const auto* boulware = grid.strategy("boulware");
  const auto* linear = grid.strategy("linear");
  const auto* conceder = grid.strategy("conceder");
  const auto* two_index = grid.strategy("two-index");

  report(7, "fixed-beta retraction ordering", [&] {
    const double b = boulware->overall.retraction_rate.value;
    const double l = linear->overall.retraction_rate.value;
    const double c = conceder->overall.retraction_rate.value;
    const bool ok = c > l && l > b && b >= 0.02 && b <= 0.15 && l >= 0.10 && l <= 0.25 &&
                    c >= 0.18 && c <= 0.35;
    return Verdict{ok, fmt::format("boulware {:.3f}, linear {:.3f}, conceder {:.3f}", b, l, c)};
  });

  report(8, "savings vs agreement tradeoff", [&] {
    const auto s = [](const StrategyAggregate* a) { return a->overall.mean_savings.value; };
    const auto g = [](const StrategyAggregate* a) { return a->overall.agreement_rate.value; };
    const bool ok = s(boulware) > s(linear) && s(linear) > s(conceder) &&
                    g(conceder) > g(linear) && g(linear) > g(boulware);
    return Verdict{ok, fmt::format("savings {:.3f} > {:.3f} > {:.3f}; agreement "
                                   "{:.1f}% < {:.1f}% < {:.1f}%",
                                   s(boulware), s(linear), s(conceder), 100 * g(boulware),
                                   100 * g(linear), 100 * g(conceder))};
  });

  report(9, "two-index regime adaptation", [&] {
    const double n = two_index->by_regime.at("narrow").mean_savings.value;
    const double m = two_index->by_regime.at("medium").mean_savings.value;
    const double w = two_index->by_regime.at("wide").mean_savings.value;
    const double bw = boulware->by_regime.at("wide").mean_savings.value;
    const bool ok = n < m && m < w && std::fabs(n - 0.617) <= 0.08 &&
                    std::fabs(m - 0.697) <= 0.08 && std::fabs(w - 0.764) <= 0.08 &&
                    w >= bw - 0.02;
    return Verdict{ok, fmt::format("narrow {:.3f}, medium {:.3f}, wide {:.3f}; boulware wide {:.3f}",
                                   n, m, w, bw)};
  });

  report(10, "fixed-beta failure against hardliner", [&] {
    const double b = boulware->by_carrier.at("hardliner").agreement_rate.value;
    const double l = linear->by_carrier.at("hardliner").agreement_rate.value;
    return Verdict{b == 0.0 && l == 0.0,
                   fmt::format("boulware {:.1f}%, linear {:.1f}%", 100 * b, 100 * l)};
  });

  report(11, "c sensitivity", [&] {
    bool ok = sweep.size() == 6;
    std::string line;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      const auto& m = sweep[i].strategies.front().overall;
      line += fmt::format("c={:g}: {:.1f}%/{:.3f}/{:.0f}r  ", sweep[i].calibration_constant,
                          100 * m.agreement_rate.value, m.mean_savings.value,
                          m.retraction_rate.value * static_cast<double>(m.n));
      if (m.retraction_rate.value != 0.0) ok = false;
      if (i == 0) continue;
      const auto& p = sweep[i - 1].strategies.front().overall;
      const double sav_noise = std::max(p.mean_savings.ci_half_width, m.mean_savings.ci_half_width);
      const double agr_noise = std::max(p.agreement_rate.ci_half_width, m.agreement_rate.ci_half_width);
      if (m.mean_savings.value > p.mean_savings.value + sav_noise) ok = false;
      if (m.agreement_rate.value < p.agreement_rate.value - agr_noise) ok = false;
    }
    return Verdict{ok, line};
  });

  report(12, "case-1 holds", [&] {
    const auto& by_s = two_index->by_spread;
    std::vector<double> shares;
    for (double s : {1.0, 2.0, 4.0, 7.0}) shares.push_back(by_s.at(s).holds.share);
    bool ok = true;
    for (std::size_t i = 1; i < shares.size(); ++i) ok = ok && shares[i] < shares[i - 1];
    double above = 0.0;
    for (const auto& [s, m] : by_s) {
      if (s > 7.0) above = std::max(above, m.holds.share);
    }
    const auto& overall = two_index->overall;
    ok = ok && above == 0.0 &&
         overall.holds.affected_agreement_rate < overall.agreement_rate.value;
    return Verdict{ok, fmt::format("share S=1,2,4,7: {:.3f} {:.3f} {:.3f} {:.3f}; max above 7: "
                                   "{:.3f}; hold agreement {:.1f}% vs {:.1f}%",
                                   shares[0], shares[1], shares[2], shares[3], above,
                                   100 * overall.holds.affected_agreement_rate,
                                   100 * overall.agreement_rate.value)};
  });

  report(13, "statistics against reference values", [] {
    const auto f = nlohmann::json::parse(read_file("stats_fixtures.json"));
    int cases = 0;
    int bad = 0;
    for (const auto& c : f["welch"]) {
      const auto a = c["a"].get<std::vector<double>>();
      const auto b = c["b"].get<std::vector<double>>();
      const StatTest t = welch_t(a, b);
      ++cases;
      bad += !(close(t.statistic, c["t"], 1e-9) && close(t.df, c["df"], 1e-9) &&
               close(t.p_value, c["p"], 1e-9));
    }
    for (const auto& c : f["two_prop"]) {
      const StatTest z = two_prop_z(c["k1"], c["n1"], c["k2"], c["n2"]);
      ++cases;
      bad += !(close(z.statistic, c["z"], 1e-9) && close(z.p_value, c["p"], 1e-9));
    }
    for (const auto& c : f["wald"]) {
      const std::size_t n = c["n"];
      const double p = static_cast<double>(c["k"].get<std::size_t>()) / static_cast<double>(n);
      ++cases;
      bad += !close(wald_ci(p, n, c["z"]), c["half_width"], 1e-9);
    }
    const double w = wald_ci(0.66, 21000);
    return Verdict{bad == 0 && cases >= 300 && w >= 0.0063 && w <= 0.0065,
                   fmt::format("{} fixture cases, {} mismatches; wald(0.66, 21000) = {:.5f}",
                               cases, bad, w)};
  });

  report(14, "llm adapter", [] {
    using namespace freightneg::llm;
    // Prompt text against the reference copy.
    const std::string reference = read_file("broker_prompt.txt");
    const Load load{"L1", "Chicago, IL", "Dallas, TX", Rate(1800), Rate(2400), Rate(2100)};
    std::string expected = reference;
    for (const auto& [from, to] :
         std::vector<std::pair<std::string, std::string>>{{"{load_id}", "L1"},
                                                          {"{origin}", "Chicago, IL"},
                                                          {"{destination}", "Dallas, TX"},
                                                          {"{min_rate}", "1,800"},
                                                          {"{max_rate}", "2,400"},
                                                          {"{target_rate}", "2,100"}}) {
      expected.replace(expected.find(from), from.size(), to);
    }
    const bool prompt_ok = render_broker_prompt(load) == expected &&
                           round_note(9) == "[Round 9 of 10. You have 1 round(s) remaining.]";

    // Parse suite.
    const auto cases = nlohmann::json::parse(read_file("parse_turn_cases.json"));
    int parse_bad = 0;
    for (const auto& c : cases) {
      const std::string intent = c["intent"];
      try {
        const ParsedTurn t = parse_turn(c["text"].get<std::string>());
        bool ok = intent != "error" && to_string(t.intent) == intent;
        if (c["rate"].is_null()) {
          ok = ok && !t.rate;
        } else {
          ok = ok && t.rate && std::fabs(t.rate->value() - c["rate"].get<double>()) < 1e-9;
        }
        parse_bad += !ok;
      } catch (const ParseError&) {
        parse_bad += intent != "error";
      }
    }

    // Mock negotiations through HTTP, compared with the engine-only run.
    int runs = 0;
    int run_bad = 0;
    std::size_t foreign = 0;
    const std::uint64_t seed = 5;
    for (const auto& params : all_carriers()) {
      std::vector<Load> loads;
      for (std::size_t i = 0; i < 4; ++i) loads.push_back(generate_load(seed, 4.0, i));
      MockEndpoint mock(scripted_carrier_handler(params, loads));
      EndpointConfig endpoint;
      endpoint.base_url = mock.base_url();
      HttpChatClient client(endpoint);
      for (const StrategySpec& strategy : ExperimentConfig::standard().strategies)
      for (std::size_t i = 0; i < loads.size(); ++i) {
        const ShiftSchedule schedule = gen_shift_schedule({4.0, loads[i].id, i, 0}, seed);
        const std::uint64_t key = gtft_stream_key(seed, 4.0, i, 0, strategy);
        const LlmRun run = run_llm_carrier(client, loads[i], strategy, params.kind, schedule,
                                           ProtocolConfig{}, Stream(key));
        ++runs;
        if (!run.transcript) {
          ++run_bad;
          continue;
        }
        const Transcript engine =
            cent_channel_reference(loads[i], strategy, params, schedule, key);
        foreign += run.log.foreign_broker_rates().size();
        std::vector<Rate> logged;
        for (const auto& e : run.log.entries) {
          if (e.speaker == "broker") logged.push_back(*e.engine_rate);
        }
        if (run.transcript->rounds != engine.rounds || run.transcript->outcome != engine.outcome ||
            logged != run.transcript->sent_offers()) {
          ++run_bad;
        }
      }
    }
    const bool ok = prompt_ok && cases.size() >= 30 && parse_bad == 0 && run_bad == 0 &&
                    foreign == 0;
    return Verdict{ok, fmt::format("prompt {}; parse {}/{} ok; mock runs {}/{} match engine, "
                                   "{} foreign rates",
                                   prompt_ok ? "identical" : "differs",
                                   cases.size() - static_cast<std::size_t>(parse_bad),
                                   cases.size(), runs - run_bad, runs, foreign)};
  });

  fmt::print("{} of 14 criteria passed\n", 14 - failures);
  return failures == 0 ? 0 : 1;
}
