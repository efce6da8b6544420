#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrsim/agents.hpp"
#include "lrsim/geo.hpp"

namespace lrsim {

/// Initial parameters for one vehicle; runtime state is derived at departure.
struct VehicleSpec {
  AgentId id;
  double base_speed_kmh = 50.0;
  double max_speed_kmh = 80.0;
  double tank_capacity_liters = 300.0;
  double fuel_liters = 300.0;
  double consumption_l_per_km = 0.35;
  double reliability = 1.0;
  double load_tons = 0.0;
  VehicleCategory category = VehicleCategory::Container;
  SimTime depart_time = 0.0;

  VehicleState initial_state() const;
};

/// Daily break policy plus flat per-trip fuel stops.
struct BreakPolicy {
  int meals_per_day = 0;
  double meal_hours = 0.0;
  int refreshments_per_day = 0;
  double refreshment_hours = 0.0;
  int fuel_stops = 0;
  double fuel_stop_hours = 0.0;
};

struct HazardParams {
  double base_per_km = 0.0;  // breakdown hazard before reliability scaling
};

struct WeatherUpdateSpec {
  SimTime time = 0.0;
  double severity = 0.0;
  double start_km = 0.0;
  double end_km = 0.0;
};

struct WeatherParams {
  double threshold = 0.7;    // severity at/above this triggers resting early
  double speed_factor = 0.6; // speed multiplier when pushing through bad weather
  std::vector<WeatherUpdateSpec> updates;
};

struct SilenceWindow {
  AgentId vehicle;
  SimTime from = 0.0;
  SimTime until = 0.0;  // half-open [from, until)
};

struct HeartbeatParams {
  bool enabled = true;
  double interval_hours = 0.25;
  int missed_limit = 3;
  std::vector<SilenceWindow> silences;  // scripted beacon outages
};

struct DispatchParams {
  double corridor_km = 5.0;        // on-way slack past an engaged van's target
  double weight_quality = 0.5;     // quality vs proximity blend in best_choice
  double severity_threshold = 0.5; // at/above: off-station (mobile) service
  double police_service_hours = 0.5;
  double workshop_service_hours = 1.0;
  double medical_service_hours = 0.75;
  double rescue_fuel_fraction = 0.25;  // tank fraction delivered to a dry vehicle
  double limp_speed_factor = 0.5;      // towing/limping speed vs base, on-station
};

struct ScheduleParams {
  double lateness_tolerance = 0.05;
  double rest_reduction_factor = 0.5;
  double fuel_reserve_fraction = 0.1;
  double speed_boost_cap_kmh = 0.0;  // 0: only the vehicle max applies
};

struct ScriptedRequestSpec {
  SimTime time = 0.0;
  AgentId vehicle;  // reporter; need not be a simulated vehicle
  HelpKind kind = HelpKind::Police;
  double position_km = 0.0;
  double severity = 0.0;
};

struct RouteSpec {
  CoordMode mode = CoordMode::Grid;
  std::vector<Checkpoint> checkpoints;
  std::vector<double> segment_speeds;

  Route make_route() const { return Route(checkpoints, segment_speeds); }
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double horizon_hours = 1000.0;
  RouteSpec route;
  std::vector<VehicleSpec> vehicles;
  std::vector<PoliceVanState> police_vans;
  std::vector<FuelStationState> fuel_stations;
  std::vector<RestAreaState> rest_areas;
  std::vector<ServiceUnitState> service_units;
  BreakPolicy breaks;
  HazardParams hazard;
  WeatherParams weather;
  HeartbeatParams heartbeat;
  DispatchParams dispatch;
  ScheduleParams schedule;
  std::vector<ScriptedRequestSpec> scripted_requests;
};

/// Parse and validate a scenario document; a violation raises a Config error
/// naming the offending field path (e.g. "route.segment_speeds[0]").
ScenarioConfig load_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

struct TripPlan {
  double driving_hours = 0.0;
  double driving_days = 0.0;  // rounded to 2 decimals before use, by design
  double total_hours = 0.0;
  double total_days = 0.0;
};

/// Closed-form trip planner. Break counts scale with driving days (rounded
/// to 2 decimals first - the book-keeping convention this planner's golden
/// figures rely on); fuel stops are a flat per-trip count.
TripPlan plan_trip_time(double distance_km, double speed_kmh, const BreakPolicy& breaks);

/// Half-away-from-zero rounding to two decimals.
double round2(double x);

}  // namespace lrsim
