#include "freightneg/pricing.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "freightneg/rng.hpp"

namespace freightneg {

std::string to_string(ShiftMode mode) {
  return mode == ShiftMode::Premium ? "premium" : "absolute";
}

ShiftMode parse_shift_mode(const std::string& text) {
  if (text == "premium") return ShiftMode::Premium;
  if (text == "absolute") return ShiftMode::Absolute;
  throw std::invalid_argument("unknown shift mode '" + text + "'");
}

const ShiftEvent* ShiftSchedule::at_round(int round) const {
  for (const auto& e : events) {
    if (e.round == round) return &e;
  }
  return nullptr;
}

void ShiftSchedule::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!(events[i].multiplier > 0.0) || events[i].multiplier == 1.0) {
      throw std::invalid_argument("shift multiplier must be positive and not 1");
    }
    if (events[i].round < 1) {
      throw std::invalid_argument("shift rounds start at 1");
    }
    if (i > 0 && events[i].round <= events[i - 1].round) {
      throw std::invalid_argument("shift rounds must be strictly increasing");
    }
  }
}

std::uint64_t ShiftSchedule::hash() const {
  std::uint64_t h = hash_string(key.load_id);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(key.full_spread_pct));
  h = hash_combine(h, key.load_index);
  h = hash_combine(h, key.repetition);
  for (const auto& e : events) {
    h = hash_combine(h, static_cast<std::uint64_t>(e.round));
    h = hash_combine(h, std::bit_cast<std::uint64_t>(e.multiplier));
  }
  return h;
}

ShiftSchedule gen_shift_schedule(const ShiftKey& key, std::uint64_t master_seed,
                                 const ShiftGenParams& params) {
  const int span = params.last_round - params.first_round + 1;
  if (params.events < 0 || params.events > span) {
    throw std::invalid_argument("more shift events than eligible rounds");
  }
  Stream rng(stream_key(master_seed, key.full_spread_pct, key.load_index,
                        key.repetition, Purpose::Schedule));
  ShiftSchedule schedule{key, {}};
  std::vector<int> rounds;
  while (static_cast<int>(rounds.size()) < params.events) {
    const auto r = static_cast<int>(
        rng.uniform_int(params.first_round, params.last_round));
    if (std::find(rounds.begin(), rounds.end(), r) == rounds.end()) {
      rounds.push_back(r);
    }
  }
  for (int r : rounds) {
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double magnitude =
        rng.uniform(params.min_magnitude, params.max_magnitude);
    schedule.events.push_back({r, 1.0 + sign * magnitude});
  }
  std::sort(schedule.events.begin(), schedule.events.end(),
            [](const ShiftEvent& a, const ShiftEvent& b) { return a.round < b.round; });
  return schedule;
}

Load apply_shift(const Load& load, const ShiftEvent& event, ShiftMode mode) {
  const double floor = load.r_min.value();
  const double target = load.r_target.value();
  const double moved = mode == ShiftMode::Premium
                           ? floor + event.multiplier * (target - floor)
                           : target * event.multiplier;
  Load shifted = load;
  shifted.r_target = Rate(std::clamp(moved, floor, load.r_max.value()));
  return shifted;
}

void to_json(nlohmann::json& j, const ShiftEvent& event) {
  j = nlohmann::json{{"round", event.round}, {"multiplier", event.multiplier}};
}

void from_json(const nlohmann::json& j, ShiftEvent& event) {
  event.round = j.at("round").get<int>();
  event.multiplier = j.at("multiplier").get<double>();
}

void to_json(nlohmann::json& j, const ShiftSchedule& schedule) {
  j = nlohmann::json{{"spread_pct", schedule.key.full_spread_pct},
                     {"load_id", schedule.key.load_id},
                     {"load_index", schedule.key.load_index},
                     {"repetition", schedule.key.repetition},
                     {"events", schedule.events}};
}

void from_json(const nlohmann::json& j, ShiftSchedule& schedule) {
  schedule.key.full_spread_pct = j.at("spread_pct").get<double>();
  schedule.key.load_id = j.at("load_id").get<std::string>();
  schedule.key.load_index = j.at("load_index").get<std::uint64_t>();
  schedule.key.repetition = j.at("repetition").get<std::uint64_t>();
  schedule.events = j.at("events").get<std::vector<ShiftEvent>>();
  schedule.validate();
}

}  // namespace freightneg
