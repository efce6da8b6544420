#include <doctest.h>

#include <cmath>
#include <vector>

#include "lrsim/agents.hpp"
#include "lrsim/error.hpp"

using namespace lrsim;

namespace {

Route line(double length_km, double speed = 50.0) {
  std::vector<Checkpoint> cps = {{0, {0, 0, CoordMode::Grid}, 0.0},
                                 {1, {length_km, 0, CoordMode::Grid}, length_km}};
  return Route(cps, {speed});
}

VehicleState truck(double speed = 50.0) {
  VehicleState v;
  v.id = "t";
  v.speed_kmh = speed;
  v.base_speed_kmh = speed;
  v.max_speed_kmh = 80.0;
  v.tank_capacity_liters = 300.0;
  v.fuel_liters = 300.0;
  v.consumption_l_per_km = 0.35;
  v.reliability = 1.0;
  return v;
}

}  // namespace

TEST_CASE("help request payload round-trip") {
  HelpRequest req;
  req.request_id = "rq-3";
  req.vehicle_id = "truck-1";
  req.kind = HelpKind::Medical;
  req.position_km = 812.5;
  req.severity = 0.8;
  const HelpRequest back = decode_help_request(encode_help_request(req), 4.25);
  CHECK(back.request_id == "rq-3");
  CHECK(back.vehicle_id == "truck-1");
  CHECK(back.kind == HelpKind::Medical);
  CHECK(back.position_km == doctest::Approx(812.5));
  CHECK(back.severity == doctest::Approx(0.8));
  CHECK(back.issued_at == doctest::Approx(4.25));
}

TEST_CASE("manager request ids are sequential") {
  ShipmentManagerState m;
  CHECK(m.make_request_id() == "rq-0");
  CHECK(m.make_request_id() == "rq-1");
  CHECK(m.make_request_id() == "rq-2");
}

TEST_CASE("sample_breakdown draw discipline") {
  VehicleState v = truck();

  // Fully reliable: no breakdown and, critically, no random draw consumed.
  v.reliability = 1.0;
  RandomSource a(5), b(5);
  CHECK_FALSE(sample_breakdown(v, 100.0, 0.01, a).has_value());
  CHECK(a.uniform01() == b.uniform01());

  // Zero-length segment or zero hazard: same story.
  v.reliability = 0.5;
  RandomSource c(5), d(5);
  CHECK_FALSE(sample_breakdown(v, 0.0, 0.01, c).has_value());
  CHECK_FALSE(sample_breakdown(v, 100.0, 0.0, c).has_value());
  CHECK(c.uniform01() == d.uniform01());
}

TEST_CASE("sample_breakdown occurrence and position") {
  VehicleState v = truck();
  v.reliability = 0.5;
  const double p = 1.0 - std::exp(-0.5 * 0.01 * 100.0);

  RandomSource rng(123);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) {
    auto at = sample_breakdown(v, 100.0, 0.01, rng);
    if (at) {
      ++hits;
      CHECK(*at >= 0.0);
      CHECK(*at < 100.0);
    }
  }
  // Loose band here; the tight calibration lives in the acceptance suite.
  CHECK(std::abs(hits / 2000.0 - p) < 0.05);
}

TEST_CASE("advance_vehicle crosses checkpoints with interpolated times") {
  std::vector<Checkpoint> cps = {{0, {0, 0, CoordMode::Grid}, 0.0},
                                 {1, {100, 0, CoordMode::Grid}, 100.0},
                                 {2, {250, 0, CoordMode::Grid}, 250.0}};
  Route route(cps, {50.0, 50.0});
  VehicleState v = truck(50.0);
  v.consumption_l_per_km = 0.0;
  RandomSource rng(1);

  AdvanceResult res = advance_vehicle(v, route, 10.0, 5.0, 0.0, rng);
  REQUIRE(res.events.size() == 3);  // two crossings + arrival
  CHECK(res.events[0].kind == EventKind::CheckpointPassed);
  CHECK(res.events[0].time == doctest::Approx(12.0));  // 100 km at 50 km/h
  CHECK(res.events[0].payload.integer("checkpoint") == 1);
  CHECK(res.events[1].time == doctest::Approx(15.0));
  CHECK(res.events[2].kind == EventKind::Arrived);
  CHECK(res.events[2].time == doctest::Approx(15.0));
  CHECK(v.status == VehicleStatus::Arrived);
  CHECK(v.route_km == doctest::Approx(250.0));
  CHECK(res.hours_used == doctest::Approx(5.0));
  REQUIRE(v.checkpoint_log.size() == 2);
  CHECK(v.checkpoint_log[0].checkpoint_id == 1);
  CHECK(v.checkpoint_log[0].time == doctest::Approx(12.0));
}

TEST_CASE("advance_vehicle partial leg burns fuel, no arrival") {
  Route route = line(500.0);
  VehicleState v = truck(50.0);
  RandomSource rng(1);
  AdvanceResult res = advance_vehicle(v, route, 0.0, 2.0, 0.0, rng);
  CHECK(res.events.empty());
  CHECK(v.route_km == doctest::Approx(100.0));
  CHECK(v.fuel_liters == doctest::Approx(300.0 - 100.0 * 0.35));
  CHECK(v.status == VehicleStatus::Moving);
}

TEST_CASE("advance_vehicle guards") {
  Route route = line(100.0);
  VehicleState v = truck();
  RandomSource rng(1);
  CHECK_THROWS_AS(advance_vehicle(v, route, 0.0, -1.0, 0.0, rng), Error);
  CHECK(advance_vehicle(v, route, 0.0, 0.0, 0.0, rng).events.empty());
  v.status = VehicleStatus::Resting;
  CHECK(advance_vehicle(v, route, 0.0, 1.0, 0.0, rng).events.empty());
  v.status = VehicleStatus::Moving;
  v.speed_kmh = 0.0;
  CHECK_THROWS_AS(advance_vehicle(v, route, 0.0, 1.0, 0.0, rng), Error);
}

TEST_CASE("a dry tank strands the vehicle and asks for help") {
  Route route = line(500.0);
  VehicleState v = truck(50.0);
  v.fuel_liters = 35.0;  // exactly 100 km of range
  RandomSource rng(1);
  AdvanceResult res = advance_vehicle(v, route, 2.0, 4.0, 0.0, rng);
  CHECK(v.status == VehicleStatus::AwaitingHelp);
  CHECK(v.route_km == doctest::Approx(100.0));
  CHECK(v.fuel_liters == doctest::Approx(0.0));
  CHECK(res.hours_used == doctest::Approx(2.0));
  REQUIRE(res.events.size() == 1);
  const SimEvent& ev = res.events.back();
  CHECK(ev.kind == EventKind::HelpRequested);
  CHECK(ev.time == doctest::Approx(4.0));
  CHECK(ev.payload.str("reason") == "fuel");
  CHECK(ev.payload.str("help_kind") == "workshop");
  CHECK(ev.payload.num("severity") == doctest::Approx(1.0));
  CHECK(ev.payload.num("km") == doctest::Approx(100.0));
}

TEST_CASE("a breakdown cuts the leg at the failure point") {
  Route route = line(500.0);
  VehicleState v = truck(50.0);
  v.reliability = 0.0;  // with hazard 10/km failure is all but certain
  RandomSource rng(7);
  AdvanceResult res = advance_vehicle(v, route, 0.0, 4.0, 10.0, rng);
  CHECK(v.status == VehicleStatus::BrokenDown);
  REQUIRE(!res.events.empty());
  const SimEvent& ev = res.events.back();
  CHECK(ev.kind == EventKind::Breakdown);
  CHECK(ev.payload.num("km") == doctest::Approx(v.route_km));
  const double sev = ev.payload.num("severity");
  CHECK(sev >= 0.0);
  CHECK(sev < 1.0);
  CHECK(v.route_km < 200.0);
  CHECK(res.hours_used == doctest::Approx(v.route_km / 50.0));
}

TEST_CASE("adapt_to_weather") {
  VehicleState v = truck();
  RestAreaState rest;
  rest.id = "ra";
  rest.route_km = 40.0;
  CHECK(adapt_to_weather(v, 0.9, &rest, 0.7) == WeatherDecision::RestEarly);
  CHECK(adapt_to_weather(v, 0.7, &rest, 0.7) == WeatherDecision::RestEarly);  // inclusive
  CHECK(adapt_to_weather(v, 0.69, &rest, 0.7) == WeatherDecision::Proceed);
  CHECK(adapt_to_weather(v, 0.9, nullptr, 0.7) == WeatherDecision::Proceed);
}

TEST_CASE("heartbeat monitor latches on sustained silence") {
  ShipmentManagerState m;
  m.monitored.insert("truck-1");
  m.last_heartbeat["truck-1"] = 0.5;
  m.last_known_km["truck-1"] = 25.0;

  // Silent for 0.5 h with a 0.75 h allowance: nothing yet.
  CHECK(heartbeat_monitor(m, 1.0, 0.25, 3).empty());

  // At the allowance boundary the alarm fires: lost + alarm + police request.
  auto events = heartbeat_monitor(m, 1.25, 0.25, 3);
  REQUIRE(events.size() == 3);
  CHECK(events[0].kind == EventKind::SignalLost);
  CHECK(events[0].subject == "truck-1");
  CHECK(events[0].payload.num("last_known_km") == doctest::Approx(25.0));
  CHECK(events[1].kind == EventKind::AlarmRaised);
  CHECK(events[1].subject == m.id);
  CHECK(events[1].payload.str("vehicle") == "truck-1");
  CHECK(events[2].kind == EventKind::HelpRequested);
  CHECK(events[2].payload.str("help_kind") == "police");
  CHECK(events[2].payload.num("km") == doctest::Approx(25.0));
  CHECK(events[2].payload.str("reason") == "alarm");

  // Latched: continued silence raises nothing new.
  CHECK(heartbeat_monitor(m, 1.5, 0.25, 3).empty());
  CHECK(heartbeat_monitor(m, 5.0, 0.25, 3).empty());

  // A fresh beacon re-arms the alarm for the next outage.
  m.last_heartbeat["truck-1"] = 5.0;
  m.last_known_km["truck-1"] = 120.0;
  m.alarm_latched["truck-1"] = false;
  CHECK(heartbeat_monitor(m, 5.5, 0.25, 3).empty());
  auto again = heartbeat_monitor(m, 5.75, 0.25, 3);
  REQUIRE(again.size() == 3);
  CHECK(again[0].payload.num("last_known_km") == doctest::Approx(120.0));

  CHECK_THROWS_AS(heartbeat_monitor(m, 6.0, 0.0, 3), Error);
}

TEST_CASE("choose_fuel_station picks the cheapest within reach") {
  VehicleState v = truck();
  v.route_km = 10.0;
  v.fuel_liters = 100.0;
  v.consumption_l_per_km = 1.0;
  // Usable with a 10% reserve: 90 L -> reach ends at km 100.
  std::vector<FuelStationState> stations = {
      {"fs-a", 40.0, 1000.0, 1.20, {}},
      {"fs-b", 60.0, 1000.0, 1.05, {}},
      {"fs-c", 95.0, 1000.0, 1.05, {}},
      {"fs-d", 120.0, 1000.0, 0.50, {}},  // cheapest, but out of reach
  };
  auto pick = choose_fuel_station(v, stations, 0.10);
  REQUIRE(pick.has_value());
  CHECK(*pick == "fs-b");  // price tie with fs-c goes to the nearer station

  // An empty station never wins.
  stations[1].fuel_available_liters = 0.0;
  CHECK(choose_fuel_station(v, stations, 0.10) == "fs-c");

  // Nothing reachable at all.
  v.fuel_liters = 10.0;
  CHECK_FALSE(choose_fuel_station(v, stations, 0.10).has_value());

  // Stations behind the vehicle are ignored; the reach window moves along.
  v.fuel_liters = 100.0;
  v.route_km = 70.0;  // reach now ends at km 160, putting fs-d in play
  CHECK(choose_fuel_station(v, stations, 0.10) == "fs-d");
}

TEST_CASE("triage_service sends mobile units out only for severe faults") {
  ServiceUnitState mobile;
  mobile.id = "ws-m";
  mobile.mobile = true;
  ServiceUnitState fixed;
  fixed.id = "ws-f";
  fixed.mobile = false;

  HelpRequest req;
  req.severity = 0.8;
  CHECK(triage_service(req, mobile, 0.5) == ServiceMode::OffStation);
  CHECK(triage_service(req, fixed, 0.5) == ServiceMode::OnStation);
  req.severity = 0.3;
  CHECK(triage_service(req, mobile, 0.5) == ServiceMode::OnStation);
  req.severity = 0.5;  // threshold is inclusive
  CHECK(triage_service(req, mobile, 0.5) == ServiceMode::OffStation);
}
