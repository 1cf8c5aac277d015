#include "freightneg/llm/prompts.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fmt/core.h>

namespace freightneg::llm {

namespace {

constexpr const char* kBrokerSystemPrompt =
    R"(You are a professional freight broker negotiating
rates with a carrier.

## Load Information
- Load ID: {load_id}
- Route: {origin} to {destination}
- Minimum rate (floor): ${min_rate}
- Maximum rate (budget ceiling): ${max_rate}
- Target rate (ideal settlement): ${target_rate}

## Negotiation Structure
- This negotiation has a maximum of 10 rounds.
- If no agreement is reached by round 10, the
  negotiation fails and you lose this load entirely.
- You will be told the current round number at
  the start of each turn.

## Your Objective
Negotiate the lowest possible rate for this load.
Your goal is to settle as close to the minimum rate
as possible while still reaching an agreement.

## Negotiation Guidelines
- Start with a rate near the minimum and work
  upward only as needed.
- Make concessions gradually. Do not jump to your
  maximum budget.
- The target rate represents a good outcome.
  Settling below it is excellent; settling above
  it is acceptable but not ideal.
- Never exceed the maximum rate under any
  circumstances. If the carrier will not go below
  this amount, walk away.
- Never reveal your maximum budget or target rate.
- Always state your proposed rate as a dollar
  amount (e.g., "$1,450").
- Keep responses concise (2-4 sentences).
- If you agree to a rate, say "I accept" or "deal".
- If you need to walk away, say "I'll have to pass".

## Deadline Awareness
- As the deadline approaches, concede more
  aggressively to secure the deal. A closed deal
  at a higher rate is better than no deal.
- In the final 2-3 rounds, be willing to accept
  any rate at or below your target rate. If the
  carrier is close, meet them to close the deal.
- Losing a load costs more than paying a slightly
  higher rate.

## Important
- You must decide your own counter-offers. There
  is no external tool or calculator to help you.
  Use your judgment.
- Be professional and maintain a good relationship
  with the carrier.)";

constexpr const char* kRoundNote =
    "[Round {k} of {T}. You have {N} round(s) remaining.]";

void replace_all(std::string& text, const std::string& from,
                 const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

std::string fill(std::string text,
                 const std::vector<std::pair<std::string, std::string>>& values) {
  for (const auto& [name, value] : values) {
    if (value.empty()) {
      throw std::invalid_argument("empty value for placeholder {" + name + "}");
    }
    replace_all(text, "{" + name + "}", value);
  }
  const auto open = text.find('{');
  if (open != std::string::npos) {
    const auto close = text.find('}', open);
    if (close != std::string::npos) {
      throw std::invalid_argument("unresolved placeholder " +
                                  text.substr(open, close - open + 1));
    }
  }
  return text;
}

}  // namespace

std::string format_amount(Rate rate) {
  const std::string fixed = rate.to_string();  // "1450.50"
  const auto dot = fixed.find('.');
  std::string whole = fixed.substr(0, dot);
  const std::string cents = fixed.substr(dot + 1);
  for (int pos = static_cast<int>(whole.size()) - 3; pos > 0; pos -= 3) {
    whole.insert(static_cast<std::size_t>(pos), ",");
  }
  return cents == "00" ? whole : whole + "." + cents;
}

std::string format_dollars(Rate rate) { return "$" + format_amount(rate); }

PromptBundle PromptBundle::broker() {
  return {kBrokerSystemPrompt, kRoundNote};
}

std::string render_broker_prompt(const Load& load, const PromptBundle& bundle) {
  load.validate();
  return fill(bundle.system_prompt, {{"load_id", load.id},
                                     {"origin", load.origin},
                                     {"destination", load.destination},
                                     {"min_rate", format_amount(load.r_min)},
                                     {"max_rate", format_amount(load.r_max)},
                                     {"target_rate", format_amount(load.r_target)}});
}

std::string round_note(int round, int max_rounds, const PromptBundle& bundle) {
  if (round < 1 || round > max_rounds) {
    throw std::invalid_argument("round outside [1, max_rounds]");
  }
  return fill(bundle.round_note_template, {{"k", std::to_string(round)},
                                           {"T", std::to_string(max_rounds)},
                                           {"N", std::to_string(max_rounds - round)}});
}

PersonaPrompt PersonaPrompt::calibrated(CarrierKind persona) {
  switch (persona) {
    case CarrierKind::Cooperative:
      return {persona, 30, 2, "Never", "8%"};
    case CarrierKind::TitForTat:
      return {persona, 60, 0, "3 stalls", "Mirror"};
    case CarrierKind::DeadlineExploiter:
      return {persona, 70, 0, "Never", "0.5/12%"};
    case CarrierKind::Anchoring:
      return {persona, 95, 0, "Rd 9", "2%"};
    case CarrierKind::Hardliner:
      return {persona, 90, 0, "Rd 8", "1/8%"};
  }
  throw std::invalid_argument("unknown persona");
}

namespace {

std::string style_text(CarrierKind persona) {
  switch (persona) {
    case CarrierKind::Cooperative:
      return "You value the relationship and want to close quickly. Concede "
             "steadily and accept any fair offer at or above your floor.";
    case CarrierKind::TitForTat:
      return "You mirror the broker. Concede about as much as the broker "
             "moved toward you last round; if the broker does not move, "
             "neither do you.";
    case CarrierKind::DeadlineExploiter:
      return "You hold almost still early, counting on the broker's deadline, "
             "then concede quickly in the last rounds.";
    case CarrierKind::Anchoring:
      return "You open very high to anchor the negotiation, make one visible "
             "drop, then move only in small steps.";
    case CarrierKind::Hardliner:
      return "You are tough and patient. You barely move early and concede "
             "only modestly late.";
  }
  return "";
}

std::string concession_text(const PersonaPrompt& p, const Load& load) {
  const double band = load.band();
  auto pct_of_band = [&](double pct) { return format_dollars(Rate(band * pct / 100.0)); };
  switch (p.persona) {
    case CarrierKind::Cooperative:
      return "at most " + pct_of_band(8.0) + " per round";
    case CarrierKind::TitForTat:
      return "no more than the broker's last move";
    case CarrierKind::DeadlineExploiter:
      return "at most " + pct_of_band(0.5) + " per round before the final three "
             "rounds, then at most " + pct_of_band(12.0) + " per round";
    case CarrierKind::Anchoring:
      return "at most " + pct_of_band(2.0) + " per round after your first drop";
    case CarrierKind::Hardliner:
      return "at most " + pct_of_band(1.0) + " per round before the final three "
             "rounds, then at most " + pct_of_band(8.0) + " per round";
  }
  return "";
}

std::string walkaway_text(const PersonaPrompt& p, int max_rounds) {
  switch (p.persona) {
    case CarrierKind::Cooperative:
    case CarrierKind::DeadlineExploiter:
      return "Never walk away before round " + std::to_string(max_rounds) + ".";
    case CarrierKind::TitForTat:
      return "Walk away if the broker fails to improve its offer three rounds "
             "in a row.";
    case CarrierKind::Anchoring:
      return "From round 9, walk away if the broker is still far from your rate.";
    case CarrierKind::Hardliner:
      return "From round 8, walk away if the broker is still far from your rate.";
  }
  return "";
}

}  // namespace

std::string PersonaPrompt::render(const Load& load, int max_rounds) const {
  load.validate();
  const Rate opening(load.r_min.value() + load.band() * opening_pct / 100.0);
  const Rate floor(load.r_min.value() + load.band() * floor_pct / 100.0);
  std::string out = fmt::format(
      "You are a freight carrier negotiating the rate for load {} ({} to {}) "
      "with a broker.\n\n"
      "## Your Style\n{}\n\n"
      "## Hard Constraints\n"
      "- Your opening rate is exactly {}.\n"
      "- Never accept or propose a rate below {}.\n"
      "- Concede {}.\n"
      "- {}\n\n",
      load.id, load.origin.empty() ? "origin" : load.origin,
      load.destination.empty() ? "destination" : load.destination,
      style_text(persona), format_dollars(opening), format_dollars(floor),
      concession_text(*this, load), walkaway_text(*this, max_rounds));
  out +=
      "## Response Format\n"
      "- Before each counter-offer, briefly weigh the broker's offer against "
      "your constraints.\n"
      "- Always state your rate as a dollar amount (e.g., \"$1,450\").\n"
      "- Keep responses concise (2-4 sentences).\n"
      "- If you agree to the broker's rate, say \"I accept\".\n"
      "- If you walk away, say \"I'll have to pass\".";
  return out;
}

}  // namespace freightneg::llm
