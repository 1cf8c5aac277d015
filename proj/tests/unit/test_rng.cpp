#include <cmath>
#include <set>

#include "doctest.h"
#include "freightneg/rng.hpp"

using namespace freightneg;

TEST_SUITE("rng") {

TEST_CASE("streams are pure functions of key and position") {
  Stream a(42);
  Stream b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.position() == 1000);
  Stream c(43);
  CHECK(Stream(42).next_u64() != c.next_u64());
}

TEST_CASE("uniform draws stay in range") {
  Stream s(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = s.uniform_int(2, 7);
    CHECK(k >= 2);
    CHECK(k <= 7);
  }
  CHECK_THROWS(s.uniform_int(5, 4));
}

TEST_CASE("uniform_int covers every value roughly evenly") {
  Stream s(99);
  int counts[6] = {};
  for (int i = 0; i < 60000; ++i) ++counts[s.uniform_int(2, 7) - 2];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("bernoulli frequency") {
  Stream s(5);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += s.bernoulli(0.3) ? 1 : 0;
  CHECK(std::abs(hits / 100000.0 - 0.3) < 0.01);
}

TEST_CASE("stream keys separate every coordinate") {
  std::set<std::uint64_t> keys;
  for (double s : {1.0, 2.0, 20.0}) {
    for (std::uint64_t l = 0; l < 5; ++l) {
      for (std::uint64_t r = 0; r < 3; ++r) {
        for (auto p : {Purpose::LoadGen, Purpose::Schedule, Purpose::Gtft}) {
          keys.insert(stream_key(7, s, l, r, p));
        }
      }
    }
  }
  CHECK(keys.size() == 3 * 5 * 3 * 3);
  CHECK(stream_key(7, 1.0, 0, 0, Purpose::LoadGen) !=
        stream_key(8, 1.0, 0, 0, Purpose::LoadGen));
  CHECK(hash_string("two-index") != hash_string("boulware"));
}

}
