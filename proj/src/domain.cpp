#include "freightneg/domain.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace freightneg {

Rate::Rate(double dollars) : value_(dollars) {
  if (!std::isfinite(dollars) || dollars < 0.0) {
    throw std::invalid_argument("rate must be a finite non-negative amount");
  }
}

double round_cents(double dollars) {
  // The nudge keeps decimal half-cent inputs (e.g. 2060.005) rounding up
  // despite their binary representation landing a hair below.
  return std::floor(dollars * 100.0 + 0.5 + 1e-7) / 100.0;
}

std::string Rate::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", round_cents(value_));
  return buf;
}

Rate Rate::parse(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rate: '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("not a rate: '" + text + "'");
  }
  return Rate(v);
}

void Load::validate() const {
  if (!(r_min < r_max)) {
    throw std::invalid_argument("load " + id + ": r_min must be below r_max");
  }
  if (r_target < r_min || r_target > r_max) {
    throw std::invalid_argument("load " + id +
                                ": r_target outside [r_min, r_max]");
  }
  if (r_target == r_min) {
    throw std::invalid_argument("load " + id +
                                ": degenerate spread (r_target == r_min)");
  }
}

Spread Spread::of(const Load& load) {
  const double floor = load.r_min.value();
  return Spread{100.0 * load.band() / floor, load.range() / floor};
}

std::string to_string(SpreadRegime regime) {
  switch (regime) {
    case SpreadRegime::Narrow:
      return "narrow";
    case SpreadRegime::Medium:
      return "medium";
    case SpreadRegime::Wide:
      return "wide";
  }
  return "unknown";
}

SpreadRegime classify_regime(double full_spread_pct) {
  if (!(full_spread_pct > 0.0)) {
    throw std::invalid_argument("spread must be positive");
  }
  if (full_spread_pct <= 4.0) return SpreadRegime::Narrow;
  if (full_spread_pct <= 8.0) return SpreadRegime::Medium;
  return SpreadRegime::Wide;
}

void ProtocolConfig::validate() const {
  if (max_rounds < 2) throw std::invalid_argument("max_rounds must be >= 2");
  if (!(retraction_epsilon > 0.0)) {
    throw std::invalid_argument("retraction_epsilon must be positive");
  }
  if (!(calibration_constant > 0.0)) {
    throw std::invalid_argument("calibration constant c must be positive");
  }
}

Load make_synthetic_load(Rate r_min, double full_spread_pct, std::string id,
                         std::string origin, std::string destination) {
  if (!(r_min.value() > 0.0)) {
    throw std::invalid_argument("synthetic load needs r_min > 0");
  }
  if (!(full_spread_pct > 0.0)) {
    throw std::invalid_argument("synthetic load needs a positive spread");
  }
  const double floor = r_min.value();
  const double ceiling = floor * (1.0 + full_spread_pct / 100.0);
  Load load{std::move(id), std::move(origin), std::move(destination), r_min,
            Rate(ceiling), Rate((floor + ceiling) / 2.0)};
  load.validate();
  return load;
}

void to_json(nlohmann::json& j, const Rate& rate) { j = rate.to_string(); }

void from_json(const nlohmann::json& j, Rate& rate) {
  if (j.is_string()) {
    rate = Rate::parse(j.get<std::string>());
  } else {
    rate = Rate(j.get<double>());
  }
}

void to_json(nlohmann::json& j, const Load& load) {
  j = nlohmann::json{{"id", load.id},
                     {"origin", load.origin},
                     {"destination", load.destination},
                     {"r_min", load.r_min},
                     {"r_max", load.r_max},
                     {"r_target", load.r_target}};
}

void from_json(const nlohmann::json& j, Load& load) {
  load.id = j.at("id").get<std::string>();
  load.origin = j.value("origin", "");
  load.destination = j.value("destination", "");
  load.r_min = j.at("r_min").get<Rate>();
  load.r_max = j.at("r_max").get<Rate>();
  load.r_target = j.at("r_target").get<Rate>();
  load.validate();
}

}  // namespace freightneg
