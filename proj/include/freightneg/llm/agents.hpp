#pragma once

#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "freightneg/carrier.hpp"
#include "freightneg/llm/client.hpp"
#include "freightneg/llm/parse.hpp"
#include "freightneg/llm/prompts.hpp"
#include "freightneg/protocol.hpp"

namespace freightneg::llm {

// One message crossing the adapter, with what was parsed out of it.
struct LogEntry {
  int round = 0;
  std::string speaker;  // "broker" or "carrier"
  std::string text;
  std::optional<ParsedTurn> parsed;
  // Set for outgoing broker text: the engine rate it was rendered from.
  std::optional<Rate> engine_rate;
};

struct AdapterLog {
  std::vector<LogEntry> entries;

  // Rates in broker messages that were not rendered from an engine rate.
  std::vector<Rate> foreign_broker_rates() const;
};

// Template text for an engine broker offer. The only rate it contains is
// `offer`.
std::string broker_offer_message(const Load& load, int round, Rate offer);

// Asked again after an unparseable turn.
inline constexpr const char* kReformatRequest =
    "Please reply with a single dollar amount (e.g., \"$1,450\"), or say "
    "\"I accept\" or \"I'll have to pass\".";

// Thrown when a speaker stays unparseable after the allowed re-asks.
class TurnFailed : public std::runtime_error {
 public:
  TurnFailed(int round, const std::string& speaker, const std::string& last_text);
  int round() const { return round_; }

 private:
  int round_;
};

// A carrier played by a chat model. The broker's offer reaches it as
// template text; its reply leaves only as a ParsedTurn.
class LlmCarrierAgent final : public CarrierAgent {
 public:
  LlmCarrierAgent(ChatBackend& backend, PersonaPrompt persona, Load load,
                  int max_rounds, AdapterLog& log, int max_reasks = 2);

  CarrierResponse respond(int round, Rate broker_offer) override;

 private:
  ChatBackend& backend_;
  PersonaPrompt persona_;
  Load load_;
  int max_rounds_;
  AdapterLog& log_;
  int max_reasks_;
  std::vector<ChatMessage> history_;
};

// The unconstrained broker: a chat model prompted with the broker system
// prompt decides its own counters.
class LlmBrokerAgent final : public BrokerAgent {
 public:
  LlmBrokerAgent(ChatBackend& backend, Load load, int max_rounds,
                 AdapterLog& log, int max_reasks = 2,
                 double temperature = kBrokerTemperature);

  void on_shift(int round, Rate new_target) override;
  BrokerDecision decide(const BrokerView& view) override;
  Rate current_target() const override { return target_; }

 private:
  ChatBackend& backend_;
  Load load_;
  int max_rounds_;
  AdapterLog& log_;
  int max_reasks_;
  double temperature_;
  Rate target_;
  std::optional<Rate> last_offer_;
  std::vector<ChatMessage> history_;
  std::vector<std::string> pending_notes_;
};

// Mock handler that plays a scripted archetype through the wire format.
// The load is looked up by the id in the persona prompt, and the carrier is
// rebuilt from the conversation on every request, so one handler can serve
// many concurrent negotiations.
MockEndpoint::Handler scripted_carrier_handler(const CarrierParams& params,
                                               std::vector<Load> loads,
                                               int max_rounds = 10);

// Scripted carrier text for a carrier response.
std::string carrier_reply_text(const CarrierResponse& response, Rate broker_offer);

struct LlmRun {
  std::optional<Transcript> transcript;
  std::string error;
  AdapterLog log;
};

// Engine broker against an LLM carrier.
LlmRun run_llm_carrier(ChatBackend& backend, const Load& load,
                       const StrategySpec& strategy, CarrierKind persona,
                       const ShiftSchedule& schedule, const ProtocolConfig& config,
                       Stream gtft_rng, ShiftMode mode = ShiftMode::Premium);

// LLM broker against a scripted carrier.
LlmRun run_llm_broker(ChatBackend& backend, const Load& load,
                      const CarrierParams& carrier, const ShiftSchedule& schedule,
                      const ProtocolConfig& config, ShiftMode mode = ShiftMode::Premium);

// Runs task(i) for i in [0, count) with at most `max_concurrency` in flight.
void run_bounded(std::size_t count, unsigned max_concurrency,
                 const std::function<void(std::size_t)>& task);

}  // namespace freightneg::llm
