#include "llm_command.hpp"

#include <fstream>
#include <memory>
#include <mutex>

#include <fmt/core.h>

#include "freightneg/harness.hpp"
#include "freightneg/llm/agents.hpp"

namespace freightneg::llm {

void add_cli_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--mode", o.mode, "carrier: LLM carriers vs the engine; "
                                    "broker: LLM broker vs scripted carriers")
      ->check(CLI::IsMember({"carrier", "broker"}));
  cmd->add_option("--base-url", o.base_url, "chat endpoint (env FREIGHTNEG_LLM_BASE_URL)");
  cmd->add_option("--model", o.model, "model name (env FREIGHTNEG_LLM_MODEL)");
  cmd->add_option("--temperature", o.temperature, "override sampling temperature");
  cmd->add_option("--timeout-ms", o.timeout_ms, "per-request timeout");
  cmd->add_option("--retries", o.retries, "retries on transient failures");
  cmd->add_flag("--mock", o.mock, "serve a scripted carrier on a local mock endpoint");
  cmd->add_option("--strategy", o.strategy, "engine strategy (carrier mode)");
  cmd->add_option("--carrier", o.carrier, "carrier persona");
  cmd->add_option("--spread", o.spread, "full spread in percent");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--loads", o.loads, "number of loads");
  cmd->add_option("--concurrency", o.concurrency, "negotiations in flight");
  cmd->add_option("--log", o.log_path, "write the adapter log as JSON lines");
}

namespace {

// Fixed temperature wrapper for --temperature.
class TemperatureOverride final : public ChatBackend {
 public:
  TemperatureOverride(ChatBackend& inner, double t) : inner_(inner), t_(t) {}
  std::string complete(const std::vector<ChatMessage>& m, double) override {
    return inner_.complete(m, t_);
  }

 private:
  ChatBackend& inner_;
  double t_;
};

}  // namespace

int run_cli(const CliOptions& o) {
  const CarrierKind persona = parse_carrier_kind(o.carrier);
  const ProtocolConfig config;
  ShiftGenParams shift_params;
  std::vector<Load> loads;
  std::vector<ShiftSchedule> schedules;
  for (std::size_t i = 0; i < o.loads; ++i) {
    loads.push_back(generate_load(o.seed, o.spread, i));
    schedules.push_back(
        gen_shift_schedule({o.spread, loads.back().id, i, 0}, o.seed, shift_params));
  }

  EndpointConfig endpoint = EndpointConfig::from_env();
  if (!o.base_url.empty()) endpoint.base_url = o.base_url;
  if (!o.model.empty()) endpoint.model = o.model;
  if (o.timeout_ms > 0) endpoint.timeout = std::chrono::milliseconds(o.timeout_ms);
  endpoint.max_retries = o.retries;

  std::unique_ptr<MockEndpoint> mock;
  if (o.mock) {
    if (o.mode != "carrier") throw std::invalid_argument("--mock plays carriers only");
    mock = std::make_unique<MockEndpoint>(
        scripted_carrier_handler(CarrierParams::defaults(persona), loads));
    endpoint.base_url = mock->base_url();
  }

  HttpChatClient client(endpoint);
  TemperatureOverride fixed(client, o.temperature);
  ChatBackend& backend = o.temperature >= 0.0 ? static_cast<ChatBackend&>(fixed) : client;

  const StrategySpec strategy = StrategySpec::parse(o.strategy);
  std::vector<LlmRun> runs(loads.size());
  run_bounded(loads.size(), o.concurrency, [&](std::size_t i) {
    try {
      if (o.mode == "carrier") {
        Stream gtft(gtft_stream_key(o.seed, o.spread, i, 0, strategy));
        runs[i] = run_llm_carrier(backend, loads[i], strategy, persona, schedules[i],
                                  config, gtft);
      } else {
        runs[i] = run_llm_broker(backend, loads[i], CarrierParams::defaults(persona),
                                 schedules[i], config);
      }
    } catch (const std::exception& e) {
      runs[i].error = e.what();
    }
  });

  std::ofstream log;
  if (!o.log_path.empty()) log.open(o.log_path);
  std::size_t agreed = 0;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const LlmRun& run = runs[i];
    if (log) {
      for (const auto& e : run.log.entries) {
        nlohmann::json j{{"load_id", loads[i].id}, {"round", e.round},
                         {"speaker", e.speaker}, {"text", e.text}};
        if (e.parsed) {
          j["intent"] = to_string(e.parsed->intent);
          if (e.parsed->rate) j["rate"] = *e.parsed->rate;
        }
        if (e.engine_rate) j["engine_rate"] = *e.engine_rate;
        log << j.dump() << "\n";
      }
    }
    if (!run.transcript) {
      ++failed;
      fmt::print("{}: failed: {}\n", loads[i].id, run.error);
      continue;
    }
    const Outcome& out = run.transcript->outcome;
    if (out.status == Status::Agreed) ++agreed;
    fmt::print("{}: {} in {} rounds{}, {} retractions\n", loads[i].id,
               to_string(out.status), out.rounds_used,
               out.agreed_rate ? " at " + format_dollars(*out.agreed_rate) : "",
               out.retraction_count);
  }
  fmt::print("{} of {} agreed, {} failed\n", agreed, runs.size(), failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace freightneg::llm
