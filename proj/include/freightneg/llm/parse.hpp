#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freightneg/domain.hpp"

namespace freightneg::llm {

enum class Intent { Accept, Counter, Pass };
std::string to_string(Intent intent);

struct ParsedTurn {
  Intent intent = Intent::Counter;
  std::optional<Rate> rate;  // always set for Counter

  friend bool operator==(const ParsedTurn&, const ParsedTurn&) = default;
};

// A turn that could not be turned into a protocol action. The caller may
// ask the speaker again.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  bool retryable() const { return true; }
};

// Every well-formed dollar amount ("$1,450", "$1450.5", "$ 2,100.00"), in
// order of appearance.
std::vector<Rate> extract_amounts(std::string_view text);

// Accept ("I accept", "deal") beats Pass ("I'll have to pass", "pass")
// beats Counter. The rate is the last amount in the message. Throws
// ParseError for a Counter without an amount.
ParsedTurn parse_turn(std::string_view text);

}  // namespace freightneg::llm
