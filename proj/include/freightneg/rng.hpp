#pragma once

#include <cstdint>
#include <string_view>

namespace freightneg {

// What a random stream is used for. Part of the stream key so that, for
// example, the shift schedule for a load never depends on how many draws
// load generation consumed.
enum class Purpose : std::uint64_t {
  LoadGen = 1,
  Schedule = 2,
  Gtft = 3,
};

// Counter-based stream: draw i is mix(key + i * gamma). Streams derived
// from distinct keys are independent of each other and of execution order.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer on [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_string(std::string_view text);

// Key for the stream of one (seed, S, load, repetition, purpose) tuple.
// S enters via its bit pattern scaled to basis points so 6 and 6.0 agree.
std::uint64_t stream_key(std::uint64_t master_seed, double full_spread_pct,
                         std::uint64_t load_index, std::uint64_t repetition,
                         Purpose purpose);

}  // namespace freightneg
