#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freightneg/domain.hpp"

namespace freightneg {

enum class CarrierKind { Cooperative, Hardliner, TitForTat, DeadlineExploiter, Anchoring };

std::string to_key(CarrierKind kind);
CarrierKind parse_carrier_kind(std::string_view key);

// Fractions are of the band [r_min, r_max] above r_min.
struct CarrierParams {
  CarrierKind kind = CarrierKind::Cooperative;
  double open_frac = 0.30;
  double floor_frac = 0.02;
  // alpha = x^exponent for the power-curve personas.
  double curve_exponent = 1.0;
  std::optional<int> walkaway_round;
  std::optional<double> walkaway_broker_frac;
  // Anchoring only: one drop at round 2, then a fixed step per round.
  double anchor_drop_frac = 0.10;
  double anchor_step_frac = 0.02;
  // Cooperative takes anything at or above its floor.
  bool accepts_at_floor = false;
  // From the walk-away checkpoint on, an offer at or above the walk-away
  // threshold closes the deal instead of being countered.
  bool settles_at_checkpoint = true;

  static CarrierParams defaults(CarrierKind kind);
  void validate() const;
  // Sets one field by name ("open_frac", "walkaway_round", ...).
  void set(std::string_view field, const std::string& value);
};

// Demand as a fraction of the band for the given round. `broker_offers`
// holds the broker's offers so far, the current round's last; only the
// tit-for-tat persona reads it.
double demand_fraction(const CarrierParams& params, int round, int max_rounds,
                       double r_min, double r_max,
                       std::span<const Rate> broker_offers);

Rate carrier_demand(const CarrierParams& params, int round, int max_rounds,
                    const Load& load, std::span<const Rate> broker_offers);

struct CarrierResponse {
  enum class Kind { Accept, Counter, WalkAway };
  Kind kind = Kind::Counter;
  // The persona's demand this round (the counter when kind == Counter).
  std::optional<Rate> demand;
};

std::string to_string(CarrierResponse::Kind kind);

class CarrierAgent {
 public:
  virtual ~CarrierAgent() = default;
  virtual CarrierResponse respond(int round, Rate broker_offer) = 0;
};

struct CarrierState {
  Rate current_demand;
  Rate last_broker_offer;
  int round = 0;
  std::vector<Rate> broker_offers;
};

CarrierResponse carrier_respond(const CarrierParams& params,
                                CarrierState& state, const Load& load,
                                int max_rounds, int round, Rate broker_offer);

// One of the five scripted archetypes. Carriers never see pricing shifts:
// they work off the original band.
class ScriptedCarrier final : public CarrierAgent {
 public:
  ScriptedCarrier(CarrierParams params, Load load, int max_rounds);

  CarrierResponse respond(int round, Rate broker_offer) override;
  const CarrierState& state() const { return state_; }

 private:
  CarrierParams params_;
  Load load_;
  int max_rounds_;
  CarrierState state_;
};

}  // namespace freightneg
