#include "freightneg/llm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace freightneg::llm {

std::string to_string(Intent intent) {
  switch (intent) {
    case Intent::Accept:
      return "accept";
    case Intent::Counter:
      return "counter";
    case Intent::Pass:
      return "pass";
  }
  return "unknown";
}

namespace {

// Lower-cases ASCII and folds the typographic apostrophe to '\''.
std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
      out += '\'';
      i += 2;
      continue;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
  }
  return out;
}

const std::regex& amount_pattern() {
  static const std::regex re(
      R"(\$\s?(\d{1,3}(?:,\d{3})+|\d+)(?:\.(\d{1,2}))?(?!\d)(?!,\d)(?!\.\d))");
  return re;
}

const std::regex& accept_pattern() {
  static const std::regex re(R"(\bi accept\b|\bdeal\b)");
  return re;
}

// "no deal" is a refusal, not an acceptance.
const std::regex& refusal_pattern() {
  static const std::regex re(R"(\bno deal\b|\bnot a deal\b)");
  return re;
}

const std::regex& pass_pattern() {
  static const std::regex re(R"(\bi'll have to pass\b|\bpass\b)");
  return re;
}

}  // namespace

std::vector<Rate> extract_amounts(std::string_view text) {
  std::vector<Rate> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), amount_pattern());
       it != std::sregex_iterator(); ++it) {
    std::string digits = (*it)[1].str();
    digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
    std::string cents = (*it)[2].matched ? (*it)[2].str() : "0";
    if (cents.size() == 1) cents += '0';
    // Whole cents over 100, the same double round_cents() produces.
    out.push_back(Rate((std::stod(digits) * 100.0 + std::stod(cents)) / 100.0));
  }
  return out;
}

ParsedTurn parse_turn(std::string_view text) {
  const std::string norm = normalize(text);
  const std::vector<Rate> amounts = extract_amounts(text);
  ParsedTurn turn;
  if (!amounts.empty()) turn.rate = amounts.back();

  std::string without_refusals = std::regex_replace(norm, refusal_pattern(), " ");
  if (std::regex_search(without_refusals, accept_pattern())) {
    turn.intent = Intent::Accept;
    return turn;
  }
  if (std::regex_search(norm, pass_pattern())) {
    turn.intent = Intent::Pass;
    return turn;
  }
  turn.intent = Intent::Counter;
  if (!turn.rate) {
    throw ParseError("counter-offer without a dollar amount");
  }
  return turn;
}

}  // namespace freightneg::llm
