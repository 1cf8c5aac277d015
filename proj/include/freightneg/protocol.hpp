#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "freightneg/carrier.hpp"
#include "freightneg/domain.hpp"
#include "freightneg/pricing.hpp"
#include "freightneg/strategy.hpp"

namespace freightneg {

struct RoundRecord {
  int t = 0;
  // The broker's counter for this round. Only sent when
  // broker_action == Offer; otherwise it is the counter the carrier's
  // standing offer was scored against.
  Rate broker_offer;
  BrokerDecision::Action broker_action = BrokerDecision::Action::Offer;
  // Empty when the broker closed the round before the carrier spoke.
  std::optional<CarrierResponse::Kind> carrier_response;
  std::optional<Rate> carrier_demand;
  std::optional<ShiftEvent> shift_applied;
  Rate target;  // broker's target in force this round
  bool case1_hold = false;
  std::optional<std::int64_t> tau;

  bool offer_sent() const {
    return broker_action == BrokerDecision::Action::Offer;
  }
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

enum class Status { Agreed, WalkedAway, DeadlineExpired };
std::string to_string(Status status);
Status parse_status(const std::string& text);

struct Outcome {
  Status status = Status::DeadlineExpired;
  std::optional<Rate> agreed_rate;
  int rounds_used = 0;
  int retraction_count = 0;
  int hold_count = 0;
  // Which side walked away, when status == WalkedAway.
  std::string walked_away_by;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Everything needed to regenerate a negotiation from the harness seeds.
struct ReplayKey {
  std::uint64_t master_seed = 0;
  double full_spread_pct = 0.0;
  std::uint64_t load_index = 0;
  std::uint64_t repetition = 0;

  friend bool operator==(const ReplayKey&, const ReplayKey&) = default;
};

struct Transcript {
  Load load;
  StrategySpec strategy;
  CarrierParams carrier;
  ShiftSchedule schedule;
  ProtocolConfig config;
  ShiftMode shift_mode = ShiftMode::Premium;
  std::optional<ReplayKey> replay;
  std::vector<RoundRecord> rounds;
  Outcome outcome;

  // Broker offers that actually went out, in order.
  std::vector<Rate> sent_offers() const;
};

// Runs the alternating-offers loop with arbitrary agents. Each round: the
// scheduled shift (broker only), the broker's turn, then the carrier's.
// The transcript's strategy/carrier descriptors are left for the caller.
Transcript negotiate(const Load& load, BrokerAgent& broker,
                     CarrierAgent& carrier, const ShiftSchedule& schedule,
                     const ProtocolConfig& config,
                     ShiftMode shift_mode = ShiftMode::Premium);

// Engine broker against a scripted carrier. `gtft_rng` is only consumed by
// the generous tit-for-tat strategy.
Transcript run_negotiation(const Load& load, const StrategySpec& strategy,
                           const CarrierParams& carrier,
                           const ShiftSchedule& schedule,
                           const ProtocolConfig& config, Stream gtft_rng,
                           ShiftMode shift_mode = ShiftMode::Premium);

// Rounds with offer(t) < offer(t-1) - epsilon.
int detect_retractions(std::span<const Rate> offers, double epsilon);
int detect_retractions(const Transcript& transcript, double epsilon);

void to_json(nlohmann::json& j, const Transcript& transcript);
void from_json(const nlohmann::json& j, Transcript& transcript);

}  // namespace freightneg
