#pragma once

#include <compare>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace freightneg {

// Monetary amount in dollars. Full double precision internally; cent
// resolution only when written out.
class Rate {
 public:
  constexpr Rate() = default;
  explicit Rate(double dollars);

  constexpr double value() const { return value_; }

  // Rounds half-up to whole cents and prints with two fraction digits.
  std::string to_string() const;
  static Rate parse(const std::string& text);

  friend constexpr auto operator<=>(const Rate&, const Rate&) = default;

 private:
  double value_ = 0.0;
};

double round_cents(double dollars);

struct Load {
  std::string id;
  std::string origin;
  std::string destination;
  Rate r_min;
  Rate r_max;
  Rate r_target;

  double band() const { return r_max.value() - r_min.value(); }
  // R: the broker's concession range.
  double range() const { return r_target.value() - r_min.value(); }

  // Throws std::invalid_argument when the rate ordering is broken or the
  // target sits on the floor.
  void validate() const;

  friend bool operator==(const Load&, const Load&) = default;
};

// S is the full band in percent, s the target-to-floor fraction.
struct Spread {
  double full_spread_pct = 0.0;
  double target_spread_frac = 0.0;

  static Spread of(const Load& load);
};

enum class SpreadRegime { Narrow, Medium, Wide };

std::string to_string(SpreadRegime regime);

// Narrow for S <= 4, Medium for 4 < S <= 8, Wide above.
SpreadRegime classify_regime(double full_spread_pct);

struct ProtocolConfig {
  int max_rounds = 10;
  double retraction_epsilon = 0.005;
  double calibration_constant = 3.0;

  void validate() const;
};

// r_max = r_min * (1 + S/100), target at the midpoint.
Load make_synthetic_load(Rate r_min, double full_spread_pct, std::string id,
                         std::string origin = "", std::string destination = "");

void to_json(nlohmann::json& j, const Rate& rate);
void from_json(const nlohmann::json& j, Rate& rate);
void to_json(nlohmann::json& j, const Load& load);
void from_json(const nlohmann::json& j, Load& load);

}  // namespace freightneg
