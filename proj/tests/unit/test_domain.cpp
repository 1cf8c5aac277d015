#include <limits>
#include <cmath>

#include "doctest.h"
#include "freightneg/domain.hpp"

using namespace freightneg;

TEST_SUITE("domain") {

TEST_CASE("rate rejects negative and non-finite values") {
  CHECK_THROWS_AS(Rate(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(Rate(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(Rate(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK(Rate(0.0).value() == 0.0);
}

TEST_CASE("rate prints whole cents, half up") {
  CHECK(Rate(1939.247665).to_string() == "1939.25");
  CHECK(Rate(1950.0).to_string() == "1950.00");
  CHECK(Rate(0.125).to_string() == "0.13");
  CHECK(Rate(2.675).to_string() == "2.68");
  CHECK(Rate::parse("2100.50").value() == doctest::Approx(2100.5));
  CHECK_THROWS(Rate::parse("abc"));
}

TEST_CASE("regime boundaries") {
  CHECK(classify_regime(4.0) == SpreadRegime::Narrow);
  CHECK(classify_regime(0.5) == SpreadRegime::Narrow);
  CHECK(classify_regime(4.0001) == SpreadRegime::Medium);
  CHECK(classify_regime(8.0) == SpreadRegime::Medium);
  CHECK(classify_regime(8.0001) == SpreadRegime::Wide);
  CHECK(classify_regime(20.0) == SpreadRegime::Wide);
  CHECK_THROWS_AS(classify_regime(0.0), std::invalid_argument);
  CHECK_THROWS_AS(classify_regime(-1.0), std::invalid_argument);
}

TEST_CASE("regime is piecewise constant with two breakpoints") {
  int changes = 0;
  SpreadRegime prev = classify_regime(0.01);
  for (int i = 2; i <= 3000; ++i) {
    const SpreadRegime r = classify_regime(i * 0.01);
    if (r != prev) ++changes;
    prev = r;
  }
  CHECK(changes == 2);
}

TEST_CASE("synthetic loads put the target at the band midpoint") {
  SUBCASE("figure load") {
    const Load l = make_synthetic_load(Rate(1800), 100.0 / 3.0, "L1");
    CHECK(l.r_max.value() == doctest::Approx(2400.0));
    CHECK(l.r_target.value() == doctest::Approx(2100.0));
  }
  SUBCASE("six percent") {
    const Load l = make_synthetic_load(Rate(2000), 6.0, "L2");
    CHECK(l.r_max.value() == doctest::Approx(2120.0));
    CHECK(l.r_target.value() == doctest::Approx(2060.0));
    CHECK(Spread::of(l).full_spread_pct == doctest::Approx(6.0));
    CHECK(Spread::of(l).target_spread_frac == doctest::Approx(0.03));
  }
  SUBCASE("zero spread is rejected") {
    CHECK_THROWS_AS(make_synthetic_load(Rate(1000), 0.0, "L3"), std::invalid_argument);
  }
  SUBCASE("midpoint holds over many loads") {
    for (int r = 1000; r <= 3000; r += 37) {
      for (double s : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 15.0, 20.0}) {
        const Load l = make_synthetic_load(Rate(r), s, "x");
        CHECK(l.range() == doctest::Approx(l.band() / 2.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("load validation") {
  Load l = make_synthetic_load(Rate(1800), 10.0, "L");
  CHECK_NOTHROW(l.validate());
  l.r_target = l.r_min;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  l.r_target = Rate(l.r_max.value() + 1.0);
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
}

TEST_CASE("protocol config validation") {
  ProtocolConfig c;
  CHECK_NOTHROW(c.validate());
  c.max_rounds = 0;
  CHECK_THROWS(c.validate());
  c = {};
  c.retraction_epsilon = 0.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.calibration_constant = -1.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("load json round trip") {
  const Load l = make_synthetic_load(Rate(1800), 10.0, "L9", "Dallas", "Memphis");
  const nlohmann::json j = l;
  CHECK(j["r_min"] == "1800.00");
  const Load back = j.get<Load>();
  CHECK(back.id == "L9");
  CHECK(back.origin == "Dallas");
  CHECK(back.r_max.to_string() == l.r_max.to_string());
}

}
