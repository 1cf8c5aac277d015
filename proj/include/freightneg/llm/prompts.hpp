#pragma once

#include <string>

#include "freightneg/carrier.hpp"
#include "freightneg/domain.hpp"

namespace freightneg::llm {

inline constexpr double kBrokerTemperature = 0.7;
inline constexpr double kCarrierTemperature = 0.3;

// "1,450" or "1,450.50": thousands separators, cents only when non-zero.
std::string format_amount(Rate rate);
// format_amount with a leading '$'.
std::string format_dollars(Rate rate);

struct PromptBundle {
  // Placeholders: {load_id} {origin} {destination} {min_rate} {max_rate}
  // {target_rate}.
  std::string system_prompt;
  // Placeholders: {k} {T} {N}.
  std::string round_note_template;

  static PromptBundle broker();
};

// Fills every placeholder. Throws std::invalid_argument for an invalid
// load, an empty field, or a placeholder left unresolved.
std::string render_broker_prompt(const Load& load,
                                 const PromptBundle& bundle = PromptBundle::broker());

// "[Round k of T. You have N round(s) remaining.]" with N = T - k.
std::string round_note(int round, int max_rounds = 10,
                       const PromptBundle& bundle = PromptBundle::broker());

// Carrier persona for an LLM-played carrier.
struct PersonaPrompt {
  CarrierKind persona = CarrierKind::Cooperative;
  int opening_pct = 30;
  int floor_pct = 2;
  std::string walkaway_rule;
  std::string max_concession_rule;
  double temperature = kCarrierTemperature;

  static PersonaPrompt calibrated(CarrierKind persona);
  // System prompt with the exact opening and floor rates for `load`.
  std::string render(const Load& load, int max_rounds = 10) const;
};

}  // namespace freightneg::llm
