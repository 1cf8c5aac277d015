#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freightneg/domain.hpp"

namespace freightneg {

struct ShiftEvent {
  int round = 2;
  double multiplier = 1.0;

  friend bool operator==(const ShiftEvent&, const ShiftEvent&) = default;
};

// How a multiplier moves the target.
//   Premium:  r_target' = r_min + m * (r_target - r_min)
//   Absolute: r_target' = m * r_target
// Both are clamped to [r_min, r_max].
enum class ShiftMode { Premium, Absolute };

std::string to_string(ShiftMode mode);
ShiftMode parse_shift_mode(const std::string& text);

struct ShiftKey {
  double full_spread_pct = 0.0;
  std::string load_id;
  std::uint64_t load_index = 0;
  std::uint64_t repetition = 0;

  friend bool operator==(const ShiftKey&, const ShiftKey&) = default;
};

struct ShiftSchedule {
  ShiftKey key;
  std::vector<ShiftEvent> events;

  const ShiftEvent* at_round(int round) const;
  void validate() const;
  // Stable content hash, used to prove every strategy saw the same schedule.
  std::uint64_t hash() const;

  friend bool operator==(const ShiftSchedule&, const ShiftSchedule&) = default;
};

struct ShiftGenParams {
  int first_round = 2;
  int last_round = 7;
  double min_magnitude = 0.05;
  double max_magnitude = 0.40;
  int events = 1;
};

// Pure function of (key, master seed). Each event: round uniform on
// [first_round, last_round], sign a fair coin, magnitude uniform on
// [min_magnitude, max_magnitude]. Multi-event schedules draw distinct
// rounds and sort them.
ShiftSchedule gen_shift_schedule(const ShiftKey& key, std::uint64_t master_seed,
                                 const ShiftGenParams& params = {});

Load apply_shift(const Load& load, const ShiftEvent& event,
                 ShiftMode mode = ShiftMode::Premium);

void to_json(nlohmann::json& j, const ShiftEvent& event);
void from_json(const nlohmann::json& j, ShiftEvent& event);
void to_json(nlohmann::json& j, const ShiftSchedule& schedule);
void from_json(const nlohmann::json& j, ShiftSchedule& schedule);

}  // namespace freightneg
