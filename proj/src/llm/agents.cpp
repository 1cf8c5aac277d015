#include "freightneg/llm/agents.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <regex>
#include <thread>

#include <fmt/core.h>

namespace freightneg::llm {

std::vector<Rate> AdapterLog::foreign_broker_rates() const {
  std::vector<Rate> foreign;
  for (const auto& e : entries) {
    if (e.speaker != "broker") continue;
    for (const Rate r : extract_amounts(e.text)) {
      if (!e.engine_rate || r.to_string() != e.engine_rate->to_string()) {
        foreign.push_back(r);
      }
    }
  }
  return foreign;
}

std::string broker_offer_message(const Load& load, int round, Rate offer) {
  if (round == 1) {
    return fmt::format("Thanks for taking a look at load {}. We can offer {} for it.",
                       load.id, format_dollars(offer));
  }
  return fmt::format("We can offer {} for load {}.", format_dollars(offer), load.id);
}

TurnFailed::TurnFailed(int round, const std::string& speaker,
                       const std::string& last_text)
    : std::runtime_error(fmt::format("round {}: {} turn unparseable: \"{}\"", round,
                                     speaker, last_text)),
      round_(round) {}

namespace {

// Sends the conversation, re-asking on unparseable replies. Returns the
// parsed turn and appends the exchange to `history` and `log`.
template <typename Accept>
ParsedTurn converse(ChatBackend& backend, std::vector<ChatMessage>& history,
                    double temperature, int max_reasks, AdapterLog& log,
                    int round, const std::string& speaker, Accept&& acceptable) {
  std::string reply;
  for (int attempt = 0; attempt <= max_reasks; ++attempt) {
    if (attempt > 0) history.push_back({"user", kReformatRequest});
    reply = backend.complete(history, temperature);
    history.push_back({"assistant", reply});
    try {
      ParsedTurn turn = parse_turn(reply);
      if (acceptable(turn)) {
        log.entries.push_back({round, speaker, reply, turn, std::nullopt});
        return turn;
      }
    } catch (const ParseError&) {
    }
    log.entries.push_back({round, speaker, reply, std::nullopt, std::nullopt});
  }
  throw TurnFailed(round, speaker, reply);
}

}  // namespace

LlmCarrierAgent::LlmCarrierAgent(ChatBackend& backend, PersonaPrompt persona,
                                 Load load, int max_rounds, AdapterLog& log,
                                 int max_reasks)
    : backend_(backend),
      persona_(std::move(persona)),
      load_(std::move(load)),
      max_rounds_(max_rounds),
      log_(log),
      max_reasks_(max_reasks) {
  history_.push_back({"system", persona_.render(load_, max_rounds_)});
}

CarrierResponse LlmCarrierAgent::respond(int round, Rate broker_offer) {
  const std::string text = broker_offer_message(load_, round, broker_offer);
  log_.entries.push_back({round, "broker", text, std::nullopt, broker_offer});
  history_.push_back({"user", round_note(round, max_rounds_) + "\n" + text});

  const ParsedTurn turn =
      converse(backend_, history_, persona_.temperature, max_reasks_, log_, round,
               "carrier", [](const ParsedTurn&) { return true; });
  switch (turn.intent) {
    case Intent::Accept:
      return {CarrierResponse::Kind::Accept, std::nullopt};
    case Intent::Pass:
      return {CarrierResponse::Kind::WalkAway, std::nullopt};
    case Intent::Counter:
      break;
  }
  return {CarrierResponse::Kind::Counter, turn.rate};
}

LlmBrokerAgent::LlmBrokerAgent(ChatBackend& backend, Load load, int max_rounds,
                               AdapterLog& log, int max_reasks, double temperature)
    : backend_(backend),
      load_(std::move(load)),
      max_rounds_(max_rounds),
      log_(log),
      max_reasks_(max_reasks),
      temperature_(temperature),
      target_(load_.r_target) {
  history_.push_back({"system", render_broker_prompt(load_)});
}

void LlmBrokerAgent::on_shift(int, Rate new_target) {
  target_ = new_target;
  pending_notes_.push_back("[Pricing update: your target rate is now " +
                           format_dollars(new_target) + ".]");
}

BrokerDecision LlmBrokerAgent::decide(const BrokerView& view) {
  std::string message;
  for (const auto& note : pending_notes_) message += note + "\n";
  pending_notes_.clear();
  message += round_note(view.round, max_rounds_) + "\n";
  std::string carrier_text;
  if (view.standing_carrier_offer) {
    carrier_text = "Best I can do is " + format_dollars(*view.standing_carrier_offer) +
                   " for this lane.";
  } else {
    carrier_text = "Hi, this is the carrier for load " + load_.id +
                   ". What rate are you offering?";
  }
  log_.entries.push_back({view.round, "carrier", carrier_text, std::nullopt, std::nullopt});
  history_.push_back({"user", message + carrier_text});

  const bool can_accept = view.standing_carrier_offer.has_value();
  const ParsedTurn turn = converse(
      backend_, history_, temperature_, max_reasks_, log_, view.round, "broker",
      [&](const ParsedTurn& t) { return t.intent != Intent::Accept || can_accept; });

  BrokerDecision decision;
  decision.offer = last_offer_.value_or(load_.r_min);
  switch (turn.intent) {
    case Intent::Accept:
      decision.action = BrokerDecision::Action::AcceptCarrier;
      break;
    case Intent::Pass:
      decision.action = BrokerDecision::Action::WalkAway;
      break;
    case Intent::Counter:
      decision.action = BrokerDecision::Action::Offer;
      decision.offer = *turn.rate;
      last_offer_ = *turn.rate;
      break;
  }
  return decision;
}

std::string carrier_reply_text(const CarrierResponse& response, Rate broker_offer) {
  switch (response.kind) {
    case CarrierResponse::Kind::Accept:
      return "Deal. I accept " + format_dollars(broker_offer) + ".";
    case CarrierResponse::Kind::WalkAway:
      return "That doesn't work for us. I'll have to pass.";
    case CarrierResponse::Kind::Counter:
      break;
  }
  return "Best I can do is " + format_dollars(*response.demand) + " for this lane.";
}

MockEndpoint::Handler scripted_carrier_handler(const CarrierParams& params,
                                               std::vector<Load> loads,
                                               int max_rounds) {
  std::map<std::string, Load> by_id;
  for (auto& l : loads) by_id.emplace(l.id, std::move(l));
  return [params, by_id = std::move(by_id), max_rounds](const nlohmann::json& request) {
    static const std::regex load_re(R"(load (\S+) \()");
    static const std::regex round_re(R"(\[Round (\d+) of)");
    const auto& messages = request.at("messages");
    std::smatch m;
    const std::string system = messages.at(0).at("content").get<std::string>();
    if (!std::regex_search(system, m, load_re) || !by_id.count(m[1].str())) {
      return MockEndpoint::Reply::error(400);
    }
    const Load& load = by_id.at(m[1].str());
    ScriptedCarrier carrier(params, load, max_rounds);
    CarrierResponse last;
    Rate last_offer;
    for (const auto& msg : messages) {
      if (msg.at("role") != "user") continue;
      const std::string text = msg.at("content").get<std::string>();
      if (!std::regex_search(text, m, round_re)) continue;
      const auto amounts = extract_amounts(text);
      if (amounts.empty()) return MockEndpoint::Reply::error(400);
      last_offer = amounts.back();
      last = carrier.respond(std::stoi(m[1].str()), last_offer);
    }
    return MockEndpoint::Reply::text(carrier_reply_text(last, last_offer));
  };
}

LlmRun run_llm_carrier(ChatBackend& backend, const Load& load,
                       const StrategySpec& strategy, CarrierKind persona,
                       const ShiftSchedule& schedule, const ProtocolConfig& config,
                       Stream gtft_rng, ShiftMode mode) {
  LlmRun run;
  BrokerStrategy broker(strategy, load, config, gtft_rng);
  LlmCarrierAgent carrier(backend, PersonaPrompt::calibrated(persona), load,
                          config.max_rounds, run.log);
  try {
    Transcript tr = negotiate(load, broker, carrier, schedule, config, mode);
    tr.strategy = strategy;
    tr.carrier = CarrierParams::defaults(persona);
    run.transcript = std::move(tr);
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  return run;
}

LlmRun run_llm_broker(ChatBackend& backend, const Load& load,
                      const CarrierParams& carrier, const ShiftSchedule& schedule,
                      const ProtocolConfig& config, ShiftMode mode) {
  LlmRun run;
  LlmBrokerAgent broker(backend, load, config.max_rounds, run.log);
  ScriptedCarrier opponent(carrier, load, config.max_rounds);
  try {
    Transcript tr = negotiate(load, broker, opponent, schedule, config, mode);
    tr.carrier = carrier;
    run.transcript = std::move(tr);
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  return run;
}

void run_bounded(std::size_t count, unsigned max_concurrency,
                 const std::function<void(std::size_t)>& task) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, max_concurrency), count));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

}  // namespace freightneg::llm
