#include "freightneg/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace freightneg {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  // SplitMix64 finalizer.
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (mix64(value) + kGamma + (seed << 6) + (seed >> 2)));
}

std::uint64_t hash_string(std::string_view text) {
  // FNV-1a, then mixed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

std::uint64_t Stream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double Stream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::int64_t Stream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t draw = next_u64();
  while (draw >= limit) draw = next_u64();
  return lo + static_cast<std::int64_t>(draw % span);
}

bool Stream::bernoulli(double p) { return uniform() < p; }

std::uint64_t stream_key(std::uint64_t master_seed, double full_spread_pct,
                         std::uint64_t load_index, std::uint64_t repetition,
                         Purpose purpose) {
  const auto spread_bp =
      static_cast<std::uint64_t>(std::llround(full_spread_pct * 10000.0));
  std::uint64_t h = mix64(master_seed);
  h = hash_combine(h, spread_bp);
  h = hash_combine(h, load_index);
  h = hash_combine(h, repetition);
  h = hash_combine(h, static_cast<std::uint64_t>(purpose));
  return h;
}

}  // namespace freightneg
