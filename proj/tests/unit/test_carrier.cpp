#include <cmath>
#include <vector>

#include "doctest.h"
#include "freightneg/carrier.hpp"
#include "freightneg/rng.hpp"

using namespace freightneg;

namespace {

const Load kLoad = make_synthetic_load(Rate(1800), 100.0 / 3.0, "L1");  // band 600

Rate at_frac(double f) { return Rate(1800 + f * 600); }

double frac(CarrierKind k, int round, std::vector<Rate> offers = {}) {
  return demand_fraction(CarrierParams::defaults(k), round, 10, 1800, 2400, offers);
}

}  // namespace

TEST_SUITE("carrier") {

TEST_CASE("power-curve demands") {
  // Hardliner round 3: 0.90 - 0.3^3 * 0.90.
  CHECK(frac(CarrierKind::Hardliner, 3) == doctest::Approx(0.90 - 0.027 * 0.90));
  CHECK(frac(CarrierKind::Hardliner, 3) == doctest::Approx(0.8757));
  CHECK(frac(CarrierKind::Cooperative, 1) == doctest::Approx(0.30 - 0.1 * 0.28));
  // Deadline: alpha = 0.7^5 = 0.16807 at round 7, 1 at round 10.
  CHECK(frac(CarrierKind::DeadlineExploiter, 7) == doctest::Approx(0.70 - 0.16807 * 0.70));
  CHECK(frac(CarrierKind::DeadlineExploiter, 10) == doctest::Approx(0.0));
}

TEST_CASE("power-curve personas reach their floor at the deadline") {
  for (auto k : {CarrierKind::Cooperative, CarrierKind::Hardliner,
                 CarrierKind::DeadlineExploiter}) {
    CHECK(frac(k, 10) == doctest::Approx(CarrierParams::defaults(k).floor_frac));
  }
}

TEST_CASE("anchoring drops once then steps") {
  CHECK(frac(CarrierKind::Anchoring, 1) == doctest::Approx(0.95));
  CHECK(frac(CarrierKind::Anchoring, 2) == doctest::Approx(0.85));
  CHECK(frac(CarrierKind::Anchoring, 3) == doctest::Approx(0.83));
  CHECK(frac(CarrierKind::Anchoring, 10) == doctest::Approx(0.69));
}

TEST_CASE("tit-for-tat mirrors broker moves as band fractions") {
  const std::vector<Rate> offers{Rate(1800), Rate(1860), Rate(1850), Rate(1910)};
  CHECK(frac(CarrierKind::TitForTat, 1, {offers[0]}) == doctest::Approx(0.60));
  CHECK(frac(CarrierKind::TitForTat, 2, {offers[0], offers[1]}) == doctest::Approx(0.50));
  // A broker step back does not raise the demand.
  CHECK(frac(CarrierKind::TitForTat, 3, {offers[0], offers[1], offers[2]}) ==
        doctest::Approx(0.50));
  CHECK(frac(CarrierKind::TitForTat, 4, offers) == doctest::Approx(0.40));
}

TEST_CASE("demand sequences never rise") {
  Stream rng(8);
  for (auto k : {CarrierKind::Cooperative, CarrierKind::Hardliner, CarrierKind::TitForTat,
                 CarrierKind::DeadlineExploiter, CarrierKind::Anchoring}) {
    for (int trial = 0; trial < 200; ++trial) {
      ScriptedCarrier c(CarrierParams::defaults(k), kLoad, 10);
      std::optional<Rate> prev;
      // Low offers keep the carrier countering.
      for (int t = 1; t <= 7; ++t) {
        const auto r = c.respond(t, at_frac(rng.uniform(0.0, 0.02)));
        if (r.kind != CarrierResponse::Kind::Counter) break;
        if (prev) CHECK(*r.demand <= *prev);
        prev = r.demand;
      }
    }
  }
}

TEST_CASE("demands stay inside the band") {
  for (auto k : {CarrierKind::Cooperative, CarrierKind::Hardliner, CarrierKind::TitForTat,
                 CarrierKind::DeadlineExploiter, CarrierKind::Anchoring}) {
    for (int t = 1; t <= 10; ++t) {
      const Rate d = carrier_demand(CarrierParams::defaults(k), t, 10, kLoad,
                                    std::vector<Rate>{Rate(1800)});
      CHECK(d >= kLoad.r_min);
      CHECK(d <= kLoad.r_max);
    }
  }
}

TEST_CASE("hardliner walks away at round 8 below 60 percent") {
  ScriptedCarrier c(CarrierParams::defaults(CarrierKind::Hardliner), kLoad, 10);
  for (int t = 1; t <= 7; ++t) {
    CHECK(c.respond(t, at_frac(0.55)).kind == CarrierResponse::Kind::Counter);
  }
  CHECK(c.respond(8, at_frac(0.55)).kind == CarrierResponse::Kind::WalkAway);
}

TEST_CASE("hardliner accepts only once its demand reaches the offer") {
  // Demand fractions 0.899, 0.893, 0.876, 0.842, then 0.7875 at round 5.
  ScriptedCarrier c(CarrierParams::defaults(CarrierKind::Hardliner), kLoad, 10);
  for (int t = 1; t <= 4; ++t) {
    CHECK(c.respond(t, at_frac(0.80)).kind == CarrierResponse::Kind::Counter);
  }
  CHECK(c.respond(5, at_frac(0.80)).kind == CarrierResponse::Kind::Accept);
}

TEST_CASE("anchoring at exactly 50 percent in round 9 stays") {
  ScriptedCarrier c(CarrierParams::defaults(CarrierKind::Anchoring), kLoad, 10);
  for (int t = 1; t <= 8; ++t) c.respond(t, at_frac(0.2));
  CHECK(c.respond(9, at_frac(0.50)).kind != CarrierResponse::Kind::WalkAway);
  ScriptedCarrier d(CarrierParams::defaults(CarrierKind::Anchoring), kLoad, 10);
  for (int t = 1; t <= 8; ++t) d.respond(t, at_frac(0.2));
  CHECK(d.respond(9, at_frac(0.49)).kind == CarrierResponse::Kind::WalkAway);
}

TEST_CASE("checkpoint settle can be switched off") {
  CarrierParams p = CarrierParams::defaults(CarrierKind::Anchoring);
  p.settles_at_checkpoint = false;
  ScriptedCarrier c(p, kLoad, 10);
  for (int t = 1; t <= 8; ++t) c.respond(t, at_frac(0.2));
  CHECK(c.respond(9, at_frac(0.55)).kind == CarrierResponse::Kind::Counter);
  ScriptedCarrier settle(CarrierParams::defaults(CarrierKind::Anchoring), kLoad, 10);
  for (int t = 1; t <= 8; ++t) settle.respond(t, at_frac(0.2));
  CHECK(settle.respond(9, at_frac(0.55)).kind == CarrierResponse::Kind::Accept);
}

TEST_CASE("cooperative takes anything at its floor in round 1") {
  ScriptedCarrier c(CarrierParams::defaults(CarrierKind::Cooperative), kLoad, 10);
  CHECK(c.respond(1, at_frac(0.02)).kind == CarrierResponse::Kind::Accept);
  ScriptedCarrier d(CarrierParams::defaults(CarrierKind::Cooperative), kLoad, 10);
  CHECK(d.respond(1, at_frac(0.01)).kind == CarrierResponse::Kind::Counter);
}

TEST_CASE("offers at the demand are accepted") {
  const CarrierParams p = CarrierParams::defaults(CarrierKind::DeadlineExploiter);
  ScriptedCarrier c(p, kLoad, 10);
  const Rate d1 = carrier_demand(p, 1, 10, kLoad, std::vector<Rate>{Rate(1800)});
  CHECK(c.respond(1, d1).kind == CarrierResponse::Kind::Accept);
}

TEST_CASE("params parsing and validation") {
  CHECK(parse_carrier_kind("tft") == CarrierKind::TitForTat);
  CHECK(to_key(CarrierKind::DeadlineExploiter) == "deadline");
  CHECK_THROWS(parse_carrier_kind("grumpy"));
  CarrierParams p = CarrierParams::defaults(CarrierKind::Hardliner);
  p.set("open_frac", "0.8");
  CHECK(p.open_frac == 0.8);
  p.set("walkaway_round", "none");
  CHECK_THROWS(p.validate());
  p.set("walkaway_broker_frac", "none");
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS(p.set("mood", "1"));
  p.floor_frac = 0.9;
  CHECK_THROWS(p.validate());
}

}
