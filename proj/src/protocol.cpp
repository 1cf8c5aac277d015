#include "freightneg/protocol.hpp"

#include <stdexcept>

namespace freightneg {

std::string to_string(Status status) {
  switch (status) {
    case Status::Agreed:
      return "agreed";
    case Status::WalkedAway:
      return "walked_away";
    case Status::DeadlineExpired:
      return "deadline_expired";
  }
  return "unknown";
}

Status parse_status(const std::string& text) {
  for (auto s : {Status::Agreed, Status::WalkedAway, Status::DeadlineExpired}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown status '" + text + "'");
}

std::vector<Rate> Transcript::sent_offers() const {
  std::vector<Rate> offers;
  offers.reserve(rounds.size());
  for (const auto& r : rounds) {
    if (r.offer_sent()) offers.push_back(r.broker_offer);
  }
  return offers;
}

Transcript negotiate(const Load& load, BrokerAgent& broker,
                     CarrierAgent& carrier, const ShiftSchedule& schedule,
                     const ProtocolConfig& config, ShiftMode shift_mode) {
  load.validate();
  config.validate();
  schedule.validate();

  Transcript tr;
  tr.load = load;
  tr.schedule = schedule;
  tr.config = config;
  tr.shift_mode = shift_mode;

  Load broker_view = load;
  std::optional<Rate> standing;
  std::optional<Rate> previous;
  bool finished = false;

  for (int t = 1; t <= config.max_rounds && !finished; ++t) {
    RoundRecord rec;
    rec.t = t;
    if (const ShiftEvent* event = schedule.at_round(t)) {
      broker_view = apply_shift(broker_view, *event, shift_mode);
      broker.on_shift(t, broker_view.r_target);
      rec.shift_applied = *event;
    }

    const BrokerDecision decision = broker.decide({t, standing, previous});
    rec.broker_offer = decision.offer;
    rec.broker_action = decision.action;
    rec.case1_hold = decision.held;
    rec.tau = decision.tau;
    rec.target = broker.current_target();
    if (decision.held) ++tr.outcome.hold_count;

    switch (decision.action) {
      case BrokerDecision::Action::AcceptCarrier:
        tr.outcome.status = Status::Agreed;
        tr.outcome.agreed_rate = standing;
        finished = true;
        break;
      case BrokerDecision::Action::WalkAway:
        tr.outcome.status = Status::WalkedAway;
        tr.outcome.walked_away_by = "broker";
        finished = true;
        break;
      case BrokerDecision::Action::Offer: {
        const CarrierResponse response = carrier.respond(t, decision.offer);
        rec.carrier_response = response.kind;
        rec.carrier_demand = response.demand;
        if (response.kind == CarrierResponse::Kind::Accept) {
          tr.outcome.status = Status::Agreed;
          tr.outcome.agreed_rate = decision.offer;
          finished = true;
        } else if (response.kind == CarrierResponse::Kind::WalkAway) {
          tr.outcome.status = Status::WalkedAway;
          tr.outcome.walked_away_by = "carrier";
          finished = true;
        } else {
          previous = standing;
          standing = response.demand;
        }
        break;
      }
    }
    tr.outcome.rounds_used = t;
    tr.rounds.push_back(std::move(rec));
  }

  tr.outcome.retraction_count =
      detect_retractions(tr.sent_offers(), config.retraction_epsilon);
  return tr;
}

Transcript run_negotiation(const Load& load, const StrategySpec& strategy,
                           const CarrierParams& carrier,
                           const ShiftSchedule& schedule,
                           const ProtocolConfig& config, Stream gtft_rng,
                           ShiftMode shift_mode) {
  BrokerStrategy broker(strategy, load, config, gtft_rng);
  ScriptedCarrier opponent(carrier, load, config.max_rounds);
  Transcript tr =
      negotiate(load, broker, opponent, schedule, config, shift_mode);
  tr.strategy = strategy;
  tr.carrier = carrier;
  return tr;
}

int detect_retractions(std::span<const Rate> offers, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  int count = 0;
  for (std::size_t i = 1; i < offers.size(); ++i) {
    if (offers[i].value() < offers[i - 1].value() - epsilon) ++count;
  }
  return count;
}

int detect_retractions(const Transcript& transcript, double epsilon) {
  return detect_retractions(transcript.sent_offers(), epsilon);
}

namespace {

std::string action_key(BrokerDecision::Action action) {
  switch (action) {
    case BrokerDecision::Action::Offer:
      return "offer";
    case BrokerDecision::Action::AcceptCarrier:
      return "accept";
    case BrokerDecision::Action::WalkAway:
      return "walk_away";
  }
  return "unknown";
}

BrokerDecision::Action parse_action(const std::string& text) {
  for (auto a : {BrokerDecision::Action::Offer,
                 BrokerDecision::Action::AcceptCarrier,
                 BrokerDecision::Action::WalkAway}) {
    if (action_key(a) == text) return a;
  }
  throw std::invalid_argument("unknown broker action '" + text + "'");
}

CarrierResponse::Kind parse_response(const std::string& text) {
  for (auto k : {CarrierResponse::Kind::Accept, CarrierResponse::Kind::Counter,
                 CarrierResponse::Kind::WalkAway}) {
    if (to_string(k) == text) return k;
  }
  throw std::invalid_argument("unknown carrier response '" + text + "'");
}

nlohmann::json carrier_json(const CarrierParams& p) {
  nlohmann::json j{{"kind", to_key(p.kind)},
                   {"open_frac", p.open_frac},
                   {"floor_frac", p.floor_frac},
                   {"curve_exponent", p.curve_exponent},
                   {"anchor_drop_frac", p.anchor_drop_frac},
                   {"anchor_step_frac", p.anchor_step_frac},
                   {"accepts_at_floor", p.accepts_at_floor},
                   {"settles_at_checkpoint", p.settles_at_checkpoint}};
  j["walkaway_round"] = p.walkaway_round ? nlohmann::json(*p.walkaway_round)
                                         : nlohmann::json(nullptr);
  j["walkaway_broker_frac"] = p.walkaway_broker_frac
                                  ? nlohmann::json(*p.walkaway_broker_frac)
                                  : nlohmann::json(nullptr);
  return j;
}

CarrierParams carrier_from_json(const nlohmann::json& j) {
  CarrierParams p = CarrierParams::defaults(
      parse_carrier_kind(j.at("kind").get<std::string>()));
  p.open_frac = j.at("open_frac").get<double>();
  p.floor_frac = j.at("floor_frac").get<double>();
  p.curve_exponent = j.at("curve_exponent").get<double>();
  p.anchor_drop_frac = j.at("anchor_drop_frac").get<double>();
  p.anchor_step_frac = j.at("anchor_step_frac").get<double>();
  p.accepts_at_floor = j.at("accepts_at_floor").get<bool>();
  p.settles_at_checkpoint = j.at("settles_at_checkpoint").get<bool>();
  p.walkaway_round.reset();
  p.walkaway_broker_frac.reset();
  if (!j.at("walkaway_round").is_null()) {
    p.walkaway_round = j.at("walkaway_round").get<int>();
  }
  if (!j.at("walkaway_broker_frac").is_null()) {
    p.walkaway_broker_frac = j.at("walkaway_broker_frac").get<double>();
  }
  p.validate();
  return p;
}

}  // namespace

void to_json(nlohmann::json& j, const Transcript& tr) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : tr.rounds) {
    nlohmann::json jr{{"t", r.t},
                      {"broker_offer", r.broker_offer},
                      {"broker_action", action_key(r.broker_action)},
                      {"target", r.target},
                      {"case1_hold", r.case1_hold}};
    jr["carrier_response"] = r.carrier_response
                                 ? nlohmann::json(to_string(*r.carrier_response))
                                 : nlohmann::json(nullptr);
    jr["carrier_demand"] = r.carrier_demand ? nlohmann::json(*r.carrier_demand)
                                            : nlohmann::json(nullptr);
    jr["shift"] = r.shift_applied ? nlohmann::json(*r.shift_applied)
                                  : nlohmann::json(nullptr);
    jr["tau"] = r.tau ? nlohmann::json(*r.tau) : nlohmann::json(nullptr);
    rounds.push_back(std::move(jr));
  }
  nlohmann::json outcome{{"status", to_string(tr.outcome.status)},
                         {"rounds_used", tr.outcome.rounds_used},
                         {"retraction_count", tr.outcome.retraction_count},
                         {"hold_count", tr.outcome.hold_count},
                         {"walked_away_by", tr.outcome.walked_away_by}};
  outcome["agreed_rate"] = tr.outcome.agreed_rate
                               ? nlohmann::json(*tr.outcome.agreed_rate)
                               : nlohmann::json(nullptr);
  j = nlohmann::json{
      {"load", tr.load},
      {"strategy",
       {{"key", tr.strategy.key()}, {"beta", tr.strategy.beta}, {"c", tr.strategy.c}}},
      {"carrier", carrier_json(tr.carrier)},
      {"schedule", tr.schedule},
      {"config",
       {{"max_rounds", tr.config.max_rounds},
        {"retraction_epsilon", tr.config.retraction_epsilon},
        {"calibration_constant", tr.config.calibration_constant}}},
      {"shift_mode", to_string(tr.shift_mode)},
      {"rounds", std::move(rounds)},
      {"outcome", std::move(outcome)}};
  if (tr.replay) {
    j["replay"] = {{"master_seed", tr.replay->master_seed},
                   {"spread_pct", tr.replay->full_spread_pct},
                   {"load_index", tr.replay->load_index},
                   {"repetition", tr.replay->repetition}};
  }
}

void from_json(const nlohmann::json& j, Transcript& tr) {
  tr.load = j.at("load").get<Load>();
  const auto& js = j.at("strategy");
  tr.strategy = StrategySpec::parse(js.at("key").get<std::string>(),
                                    js.at("c").get<double>());
  tr.strategy.beta = js.at("beta").get<double>();
  tr.carrier = carrier_from_json(j.at("carrier"));
  tr.schedule = j.at("schedule").get<ShiftSchedule>();
  const auto& jc = j.at("config");
  tr.config.max_rounds = jc.at("max_rounds").get<int>();
  tr.config.retraction_epsilon = jc.at("retraction_epsilon").get<double>();
  tr.config.calibration_constant = jc.at("calibration_constant").get<double>();
  tr.shift_mode = parse_shift_mode(j.at("shift_mode").get<std::string>());
  tr.rounds.clear();
  for (const auto& jr : j.at("rounds")) {
    RoundRecord r;
    r.t = jr.at("t").get<int>();
    r.broker_offer = jr.at("broker_offer").get<Rate>();
    r.broker_action = parse_action(jr.at("broker_action").get<std::string>());
    r.target = jr.at("target").get<Rate>();
    r.case1_hold = jr.at("case1_hold").get<bool>();
    if (!jr.at("carrier_response").is_null()) {
      r.carrier_response =
          parse_response(jr.at("carrier_response").get<std::string>());
    }
    if (!jr.at("carrier_demand").is_null()) {
      r.carrier_demand = jr.at("carrier_demand").get<Rate>();
    }
    if (!jr.at("shift").is_null()) r.shift_applied = jr.at("shift").get<ShiftEvent>();
    if (!jr.at("tau").is_null()) r.tau = jr.at("tau").get<std::int64_t>();
    tr.rounds.push_back(std::move(r));
  }
  const auto& jo = j.at("outcome");
  tr.outcome.status = parse_status(jo.at("status").get<std::string>());
  tr.outcome.rounds_used = jo.at("rounds_used").get<int>();
  tr.outcome.retraction_count = jo.at("retraction_count").get<int>();
  tr.outcome.hold_count = jo.at("hold_count").get<int>();
  tr.outcome.walked_away_by = jo.at("walked_away_by").get<std::string>();
  if (!jo.at("agreed_rate").is_null()) {
    tr.outcome.agreed_rate = jo.at("agreed_rate").get<Rate>();
  }
  if (j.contains("replay")) {
    const auto& jk = j.at("replay");
    tr.replay = ReplayKey{jk.at("master_seed").get<std::uint64_t>(),
                          jk.at("spread_pct").get<double>(),
                          jk.at("load_index").get<std::uint64_t>(),
                          jk.at("repetition").get<std::uint64_t>()};
  }
}

}  // namespace freightneg
