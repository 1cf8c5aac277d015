#include "freightneg/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace freightneg {

double ConcessionCurve::at(double position) const {
  return r_min.value() +
         std::pow(position / rounds, 1.0 / beta) * range();
}

void ConcessionCurve::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (r_target < r_min) {
    throw std::invalid_argument("curve target below floor");
  }
  if (rounds < 1) throw std::invalid_argument("curve needs T >= 1");
}

double adaptive_beta(double target_spread_frac, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(target_spread_frac > 0.0)) {
    throw std::invalid_argument("degenerate spread: s must be positive");
  }
  return c / (target_spread_frac * 100.0);
}

Rate faratin_offer(const ConcessionCurve& curve, int round) {
  if (round < 1) throw std::invalid_argument("rounds start at 1");
  if (round >= curve.rounds) return curve.r_target;
  return Rate(curve.at(round));
}

std::int64_t anchor_position(const ConcessionCurve& curve, Rate last_offer) {
  const double range = curve.range();
  if (!(range > 0.0)) throw std::invalid_argument("anchor needs R > 0");
  const double alpha0 =
      std::clamp((last_offer.value() - curve.r_min.value()) / range, 0.0, 1.0);
  const double raw = curve.rounds * std::pow(alpha0, curve.beta);
  auto tau = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
  while (tau > 1 && curve.at(static_cast<double>(tau - 1)) >= last_offer.value()) {
    --tau;
  }
  while (curve.at(static_cast<double>(tau)) < last_offer.value()) ++tau;
  return tau;
}

TwoIndexState start_two_index(const Load& load, double c, int max_rounds) {
  const double s = load.range() / load.r_min.value();
  TwoIndexState state;
  state.curve = ConcessionCurve{adaptive_beta(s, c), load.r_min, load.r_target,
                                max_rounds};
  state.curve.validate();
  state.last_offer = load.r_min;
  return state;
}

TwoIndexState apply_shift_two_index(TwoIndexState state, Rate new_target,
                                    double c, int shift_round) {
  const Rate floor = state.curve.r_min;
  if (new_target < floor) {
    throw std::invalid_argument("shifted target below r_min");
  }
  if (state.t > 0 && state.last_offer > new_target) {
    // Case 1: already conceded past the new target.
    state.hold_active = true;
    state.curve.r_target = new_target;
    return state;
  }
  const double range = new_target.value() - floor.value();
  state.curve = ConcessionCurve{adaptive_beta(range / floor.value(), c), floor,
                                new_target, state.curve.rounds};
  state.hold_active = false;
  state.anchor_round = shift_round;
  state.tau0 = state.t == 0 ? shift_round
                            : anchor_position(state.curve, state.last_offer);
  return state;
}

Rate next_two_index_offer(TwoIndexState& state, int round) {
  Rate offer = state.last_offer;
  if (state.hold_active) {
    ++state.hold_count;
  } else {
    const std::int64_t tau = state.tau_at(round);
    offer = tau >= state.curve.rounds
                ? state.curve.r_target
                : std::min(Rate(state.curve.at(static_cast<double>(tau))),
                           state.curve.r_target);
  }
  state.t = round;
  state.last_offer = offer;
  return offer;
}

void GTFTParams::validate() const {
  for (double v : {stall_threshold_frac, generosity_frac, generosity_prob}) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument("GTFT parameters must lie in (0, 1)");
    }
  }
}

Rate gtft_offer(Rate prev_offer, double carrier_concession, Rate ceiling,
                const GTFTParams& params, Stream& rng) {
  // A ceiling that moved below the last offer freezes the broker in place.
  if (ceiling <= prev_offer) return prev_offer;
  const double room = ceiling.value() - prev_offer.value();
  double next = prev_offer.value() + carrier_concession;
  if (carrier_concession < params.stall_threshold_frac * room &&
      rng.bernoulli(params.generosity_prob)) {
    next += params.generosity_frac * room;
  }
  return Rate(std::clamp(next, prev_offer.value(), ceiling.value()));
}

double broker_score(Rate x, Rate r_target, double range) {
  if (!(range > 0.0)) throw std::invalid_argument("score needs R > 0");
  return (r_target.value() - x.value()) / range;
}

StrategySpec StrategySpec::parse(std::string_view key, double default_c) {
  const std::string k(key);
  if (k == "boulware") return boulware();
  if (k == "linear") return linear();
  if (k == "conceder") return conceder();
  if (k == "gtft") return generous_tft();
  if (k == "two-index") return two_index(default_c);
  auto suffix = [&](std::string_view prefix) -> std::optional<double> {
    if (k.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      std::size_t used = 0;
      const std::string rest = k.substr(prefix.size());
      const double v = std::stod(rest, &used);
      if (used == rest.size() && v > 0.0) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("bad strategy parameter in '" + k + "'");
  };
  if (auto beta = suffix("fixed:")) return fixed(*beta);
  if (auto c = suffix("two-index:")) return two_index(*c);
  throw std::invalid_argument("unknown strategy '" + k + "'");
}

std::string StrategySpec::key() const {
  switch (kind) {
    case Kind::FixedBeta:
      if (beta == 0.6) return "boulware";
      if (beta == 1.0) return "linear";
      if (beta == 2.0) return "conceder";
      return "fixed:" + std::to_string(beta);
    case Kind::TwoIndex:
      return "two-index";
    case Kind::GenerousTft:
      return "gtft";
  }
  return "unknown";
}

std::string StrategySpec::label() const {
  char buf[64];
  switch (kind) {
    case Kind::FixedBeta:
      std::snprintf(buf, sizeof(buf), "Fixed (beta=%g)", beta);
      if (beta == 0.6) std::snprintf(buf, sizeof(buf), "Boulware (beta=0.6)");
      if (beta == 1.0) std::snprintf(buf, sizeof(buf), "Linear (beta=1.0)");
      if (beta == 2.0) std::snprintf(buf, sizeof(buf), "Conceder (beta=2.0)");
      return buf;
    case Kind::TwoIndex:
      std::snprintf(buf, sizeof(buf), "Two-Index (c=%g)", c);
      return buf;
    case Kind::GenerousTft:
      return "Gen. TFT";
  }
  return "unknown";
}

BrokerStrategy::BrokerStrategy(const StrategySpec& spec, const Load& load,
                               const ProtocolConfig& config, Stream rng)
    : spec_(spec), load_(load), config_(config), rng_(rng),
      target_(load.r_target) {
  load_.validate();
  config_.validate();
  switch (spec_.kind) {
    case StrategySpec::Kind::FixedBeta: {
      ConcessionCurve curve{spec_.beta, load_.r_min, load_.r_target,
                            config_.max_rounds};
      curve.validate();
      state_ = FixedState{curve};
      break;
    }
    case StrategySpec::Kind::TwoIndex:
      state_ = start_two_index(load_, spec_.c, config_.max_rounds);
      break;
    case StrategySpec::Kind::GenerousTft:
      spec_.gtft.validate();
      state_ = GtftState{};
      break;
  }
}

void BrokerStrategy::on_shift(int round, Rate new_target) {
  if (new_target < load_.r_min || new_target > load_.r_max) {
    throw std::invalid_argument("shifted target outside [r_min, r_max]");
  }
  target_ = new_target;
  if (auto* fixed = std::get_if<FixedState>(&state_)) {
    // Range moves, beta does not.
    fixed->curve.r_target = new_target;
  } else if (auto* two = std::get_if<TwoIndexState>(&state_)) {
    *two = apply_shift_two_index(*two, new_target, spec_.c, round);
  }
}

Rate BrokerStrategy::candidate(const BrokerView& view, bool& held,
                               std::optional<std::int64_t>& tau) {
  if (auto* fixed = std::get_if<FixedState>(&state_)) {
    return faratin_offer(fixed->curve, view.round);
  }
  if (auto* two = std::get_if<TwoIndexState>(&state_)) {
    const Rate offer = next_two_index_offer(*two, view.round);
    held = two->hold_active;
    if (!held) tau = two->tau_at(view.round);
    return offer;
  }
  auto& gtft = std::get<GtftState>(state_);
  if (!gtft.last_offer) {
    gtft.last_offer = load_.r_min;
    return load_.r_min;
  }
  double concession = 0.0;
  if (view.standing_carrier_offer && view.previous_carrier_offer) {
    concession = view.previous_carrier_offer->value() -
                 view.standing_carrier_offer->value();
  }
  gtft.last_offer =
      gtft_offer(*gtft.last_offer, concession, target_, spec_.gtft, rng_);
  return *gtft.last_offer;
}

BrokerDecision BrokerStrategy::decide(const BrokerView& view) {
  BrokerDecision decision;
  decision.offer = candidate(view, decision.held, decision.tau);
  if (view.round >= 2 && view.standing_carrier_offer) {
    const Rate carrier = *view.standing_carrier_offer;
    const double range = target_.value() - load_.r_min.value();
    const bool accept =
        range > 0.0 ? broker_score(carrier, target_, range) >=
                          broker_score(decision.offer, target_, range)
                    : carrier <= decision.offer;
    if (accept) decision.action = BrokerDecision::Action::AcceptCarrier;
  }
  return decision;
}

int BrokerStrategy::hold_count() const {
  if (const auto* two = std::get_if<TwoIndexState>(&state_)) {
    return two->hold_count;
  }
  return 0;
}

}  // namespace freightneg
