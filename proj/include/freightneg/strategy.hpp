#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "freightneg/domain.hpp"
#include "freightneg/rng.hpp"

namespace freightneg {

// Time-dependent concession curve: offer(x) = r_min + (x/T)^(1/beta) * R.
struct ConcessionCurve {
  double beta = 1.0;
  Rate r_min;
  Rate r_target;
  int rounds = 10;

  double range() const { return r_target.value() - r_min.value(); }
  // Curve value at a (possibly virtual) position. Not clamped.
  double at(double position) const;
  void validate() const;
};

// beta = c / (s * 100). Throws for s <= 0 or c <= 0.
double adaptive_beta(double target_spread_frac, double c);

// Offer at an integer round on the curve; exactly r_target at round T.
Rate faratin_offer(const ConcessionCurve& curve, int round);

// Smallest integer position tau >= 1 whose curve value reaches
// `last_offer`, computed as ceil(T * alpha0^beta) and then nudged by at
// most one step where rounding in pow() lands on the wrong side.
std::int64_t anchor_position(const ConcessionCurve& curve, Rate last_offer);

// Anchor-and-resume broker state. `t` is the negotiation round of the
// last offer produced; positions on the current curve are
// tau(t) = tau0 + (t - anchor_round).
struct TwoIndexState {
  int t = 0;
  ConcessionCurve curve;
  Rate last_offer;
  std::int64_t tau0 = 1;
  int anchor_round = 1;
  bool hold_active = false;
  int hold_count = 0;

  std::int64_t tau_at(int round) const { return tau0 + (round - anchor_round); }
};

TwoIndexState start_two_index(const Load& load, double c, int max_rounds);

// Re-targets the state at the start of `shift_round`. Holds at the last
// offer when it already exceeds the new target; otherwise re-anchors on
// the new curve. Throws when new_target < r_min.
TwoIndexState apply_shift_two_index(TwoIndexState state, Rate new_target,
                                    double c, int shift_round);

// Produces offer(round) and advances the state.
Rate next_two_index_offer(TwoIndexState& state, int round);

struct GTFTParams {
  double stall_threshold_frac = 0.05;
  double generosity_frac = 0.15;
  double generosity_prob = 0.30;

  void validate() const;
};

Rate gtft_offer(Rate prev_offer, double carrier_concession, Rate ceiling,
                const GTFTParams& params, Stream& rng);

// V(x) = (r_target - x) / R. Higher is better for the broker.
double broker_score(Rate x, Rate r_target, double range);

struct StrategySpec {
  enum class Kind { FixedBeta, TwoIndex, GenerousTft };

  Kind kind = Kind::TwoIndex;
  double beta = 1.0;  // FixedBeta only
  double c = 3.0;     // TwoIndex only
  GTFTParams gtft;

  static StrategySpec fixed(double beta) {
    StrategySpec s;
    s.kind = Kind::FixedBeta;
    s.beta = beta;
    return s;
  }
  static StrategySpec boulware() { return fixed(0.6); }
  static StrategySpec linear() { return fixed(1.0); }
  static StrategySpec conceder() { return fixed(2.0); }
  static StrategySpec generous_tft() {
    StrategySpec s;
    s.kind = Kind::GenerousTft;
    return s;
  }
  static StrategySpec two_index(double c) {
    StrategySpec s;
    s.kind = Kind::TwoIndex;
    s.c = c;
    return s;
  }

  // "boulware", "linear", "conceder", "gtft", "two-index", plus
  // "fixed:<beta>" and "two-index:<c>" for exploration.
  static StrategySpec parse(std::string_view key, double default_c = 3.0);
  std::string key() const;
  std::string label() const;
};

// What the broker sees at the start of its turn.
struct BrokerView {
  int round = 1;
  std::optional<Rate> standing_carrier_offer;
  std::optional<Rate> previous_carrier_offer;
};

struct BrokerDecision {
  enum class Action { Offer, AcceptCarrier, WalkAway };
  Action action = Action::Offer;
  Rate offer;  // counter computed this round (sent when action == Offer)
  bool held = false;
  std::optional<std::int64_t> tau;
};

class BrokerAgent {
 public:
  virtual ~BrokerAgent() = default;
  // Pricing update visible to the broker only, applied before its turn.
  virtual void on_shift(int round, Rate new_target) = 0;
  virtual BrokerDecision decide(const BrokerView& view) = 0;
  virtual Rate current_target() const = 0;
};

// The engine strategies: fixed beta, two-index and generous tit-for-tat.
class BrokerStrategy final : public BrokerAgent {
 public:
  BrokerStrategy(const StrategySpec& spec, const Load& load,
                 const ProtocolConfig& config, Stream rng);

  void on_shift(int round, Rate new_target) override;
  BrokerDecision decide(const BrokerView& view) override;
  Rate current_target() const override { return target_; }

  const StrategySpec& spec() const { return spec_; }
  int hold_count() const;

 private:
  struct FixedState {
    ConcessionCurve curve;
  };
  struct GtftState {
    std::optional<Rate> last_offer;
  };

  Rate candidate(const BrokerView& view, bool& held,
                 std::optional<std::int64_t>& tau);

  StrategySpec spec_;
  Load load_;
  ProtocolConfig config_;
  Stream rng_;
  Rate target_;
  std::variant<FixedState, TwoIndexState, GtftState> state_;
};

}  // namespace freightneg
