#include "freightneg/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace freightneg {

namespace {

// Threshold comparisons on band fractions tolerate float noise from
// r_min + f * band round trips.
constexpr double kFracTolerance = 1e-9;

double band_fraction(Rate rate, const Load& load) {
  return (rate.value() - load.r_min.value()) / load.band();
}

bool past_checkpoint(const CarrierParams& params, int round) {
  return params.walkaway_round && params.walkaway_broker_frac &&
         round >= *params.walkaway_round;
}

}  // namespace

std::string to_key(CarrierKind kind) {
  switch (kind) {
    case CarrierKind::Cooperative:
      return "cooperative";
    case CarrierKind::Hardliner:
      return "hardliner";
    case CarrierKind::TitForTat:
      return "tft";
    case CarrierKind::DeadlineExploiter:
      return "deadline";
    case CarrierKind::Anchoring:
      return "anchoring";
  }
  return "unknown";
}

CarrierKind parse_carrier_kind(std::string_view key) {
  for (auto kind : {CarrierKind::Cooperative, CarrierKind::Hardliner,
                    CarrierKind::TitForTat, CarrierKind::DeadlineExploiter,
                    CarrierKind::Anchoring}) {
    if (to_key(kind) == key) return kind;
  }
  throw std::invalid_argument("unknown carrier '" + std::string(key) + "'");
}

CarrierParams CarrierParams::defaults(CarrierKind kind) {
  CarrierParams p;
  p.kind = kind;
  switch (kind) {
    case CarrierKind::Cooperative:
      p.open_frac = 0.30;
      p.floor_frac = 0.02;
      p.curve_exponent = 1.0;
      p.accepts_at_floor = true;
      break;
    case CarrierKind::Hardliner:
      p.open_frac = 0.90;
      p.floor_frac = 0.0;
      p.curve_exponent = 3.0;
      p.walkaway_round = 8;
      p.walkaway_broker_frac = 0.60;
      break;
    case CarrierKind::TitForTat:
      p.open_frac = 0.60;
      p.floor_frac = 0.0;
      break;
    case CarrierKind::DeadlineExploiter:
      p.open_frac = 0.70;
      p.floor_frac = 0.0;
      p.curve_exponent = 5.0;
      break;
    case CarrierKind::Anchoring:
      p.open_frac = 0.95;
      p.floor_frac = 0.0;
      p.walkaway_round = 9;
      p.walkaway_broker_frac = 0.50;
      break;
  }
  return p;
}

void CarrierParams::validate() const {
  if (!(0.0 <= floor_frac && floor_frac <= open_frac && open_frac <= 1.0)) {
    throw std::invalid_argument("carrier needs 0 <= floor <= open <= 1");
  }
  if (!(curve_exponent > 0.0)) {
    throw std::invalid_argument("carrier curve exponent must be positive");
  }
  if (walkaway_round.has_value() != walkaway_broker_frac.has_value()) {
    throw std::invalid_argument(
        "walk-away needs both a round and a broker threshold");
  }
  if (anchor_drop_frac < 0.0 || anchor_step_frac < 0.0) {
    throw std::invalid_argument("anchoring steps must be non-negative");
  }
}

void CarrierParams::set(std::string_view field, const std::string& value) {
  auto as_double = [&] { return std::stod(value); };
  auto as_bool = [&] { return value == "true" || value == "1"; };
  if (field == "open_frac") {
    open_frac = as_double();
  } else if (field == "floor_frac") {
    floor_frac = as_double();
  } else if (field == "curve_exponent") {
    curve_exponent = as_double();
  } else if (field == "walkaway_round") {
    if (value == "none") {
      walkaway_round.reset();
    } else {
      walkaway_round = std::stoi(value);
    }
  } else if (field == "walkaway_broker_frac") {
    if (value == "none") {
      walkaway_broker_frac.reset();
    } else {
      walkaway_broker_frac = as_double();
    }
  } else if (field == "anchor_drop_frac") {
    anchor_drop_frac = as_double();
  } else if (field == "anchor_step_frac") {
    anchor_step_frac = as_double();
  } else if (field == "accepts_at_floor") {
    accepts_at_floor = as_bool();
  } else if (field == "settles_at_checkpoint") {
    settles_at_checkpoint = as_bool();
  } else {
    throw std::invalid_argument("unknown carrier field '" + std::string(field) +
                                "'");
  }
}

double demand_fraction(const CarrierParams& params, int round, int max_rounds,
                       double r_min, double r_max,
                       std::span<const Rate> broker_offers) {
  if (round < 1) throw std::invalid_argument("rounds start at 1");
  double frac = params.open_frac;
  switch (params.kind) {
    case CarrierKind::Cooperative:
    case CarrierKind::Hardliner:
    case CarrierKind::DeadlineExploiter: {
      const double x = std::min(1.0, static_cast<double>(round) / max_rounds);
      const double alpha = std::pow(x, params.curve_exponent);
      frac = params.open_frac - alpha * (params.open_frac - params.floor_frac);
      break;
    }
    case CarrierKind::Anchoring:
      if (round >= 2) {
        frac -= params.anchor_drop_frac + params.anchor_step_frac * (round - 2);
      }
      break;
    case CarrierKind::TitForTat: {
      // Mirror each positive broker move as a band fraction; a broker
      // retraction does not push the demand back up.
      const double band = r_max - r_min;
      const auto n = std::min<std::size_t>(broker_offers.size(),
                                           static_cast<std::size_t>(round));
      for (std::size_t i = 1; i < n; ++i) {
        const double moved =
            broker_offers[i].value() - broker_offers[i - 1].value();
        frac -= std::max(0.0, moved) / band;
      }
      break;
    }
  }
  return std::clamp(frac, params.floor_frac, params.open_frac);
}

Rate carrier_demand(const CarrierParams& params, int round, int max_rounds,
                    const Load& load, std::span<const Rate> broker_offers) {
  const double frac =
      demand_fraction(params, round, max_rounds, load.r_min.value(),
                      load.r_max.value(), broker_offers);
  return Rate(load.r_min.value() + frac * load.band());
}

std::string to_string(CarrierResponse::Kind kind) {
  switch (kind) {
    case CarrierResponse::Kind::Accept:
      return "accept";
    case CarrierResponse::Kind::Counter:
      return "counter";
    case CarrierResponse::Kind::WalkAway:
      return "walk_away";
  }
  return "unknown";
}

CarrierResponse carrier_respond(const CarrierParams& params,
                                CarrierState& state, const Load& load,
                                int max_rounds, int round, Rate broker_offer) {
  state.round = round;
  state.last_broker_offer = broker_offer;
  state.broker_offers.push_back(broker_offer);

  const double offered = band_fraction(broker_offer, load);
  if (past_checkpoint(params, round) &&
      offered < *params.walkaway_broker_frac - kFracTolerance) {
    return {CarrierResponse::Kind::WalkAway, std::nullopt};
  }

  const Rate demand =
      carrier_demand(params, round, max_rounds, load, state.broker_offers);
  // Demands never go back up.
  state.current_demand =
      state.broker_offers.size() == 1 ? demand
                                      : std::min(state.current_demand, demand);

  const bool meets_demand = broker_offer >= state.current_demand;
  const bool meets_floor =
      params.accepts_at_floor && offered >= params.floor_frac - kFracTolerance;
  const bool checkpoint_settle = params.settles_at_checkpoint &&
                                 past_checkpoint(params, round) &&
                                 offered >= *params.walkaway_broker_frac - kFracTolerance;
  if (meets_demand || meets_floor || checkpoint_settle) {
    return {CarrierResponse::Kind::Accept, state.current_demand};
  }
  return {CarrierResponse::Kind::Counter, state.current_demand};
}

ScriptedCarrier::ScriptedCarrier(CarrierParams params, Load load, int max_rounds)
    : params_(std::move(params)), load_(std::move(load)), max_rounds_(max_rounds) {
  params_.validate();
  load_.validate();
}

CarrierResponse ScriptedCarrier::respond(int round, Rate broker_offer) {
  return carrier_respond(params_, state_, load_, max_rounds_, round,
                         broker_offer);
}

}  // namespace freightneg
