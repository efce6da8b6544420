#pragma once

#include <map>
#include <string>
#include <vector>

#include "lrsim/agents.hpp"
#include "lrsim/engine.hpp"
#include "lrsim/geo.hpp"
#include "lrsim/report.hpp"
#include "lrsim/scenario.hpp"

namespace lrsim {

struct RunResult {
  Trace trace;
  std::vector<TripMetrics> metrics;
  std::vector<std::string> pending_request_ids;  // still queued at the horizon
};

/// One full scenario execution: wires vehicles, the help-service federation,
/// and the shipment manager onto the event engine and runs to the horizon
/// (or until everything has arrived). Deterministic for a fixed config.
///
/// Movement is planned leg by leg: each leg ends at the next checkpoint,
/// scheduled break mark, refuel point, or weather halt, whichever comes
/// first, and the terminal event's handler plans the next leg. State is
/// advanced when a leg is planned; observers between leg boundaries (the
/// heartbeat) interpolate along the leg, so no event is ever cancelled.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg);

  RunResult run();

  const ShipmentManagerState& manager() const { return manager_; }
  const std::vector<PoliceVanState>& vans() const { return vans_; }

 private:
  struct BreakMark {
    double at_driving_hour = 0.0;
    double duration_hours = 0.0;
    EventKind kind = EventKind::MealBreak;  // MealBreak / RefreshmentBreak / RefuelStart
  };

  enum class LegEnd { None, Checkpoint, Break, Refuel, WeatherRest };

  struct VehicleRuntime {
    VehicleState v;
    VehicleSpec spec;
    SimTime depart_time = 0.0;
    double driven_hours = 0.0;
    std::vector<BreakMark> marks;
    std::size_t next_mark = 0;
    double planned_driving_hours = 0.0;
    std::vector<double> expected_elapsed;  // indexed by checkpoint id
    // Interpolation anchors for the leg in flight.
    SimTime leg_start_time = 0.0;
    double leg_start_km = 0.0;
    double leg_speed = 0.0;
    double leg_hours = 0.0;
    LegEnd leg_end = LegEnd::None;
    int terminal_cp = -1;
    double rest_scale = 1.0;
    double recovery_speed_kmh = 0.0;  // 0: drive at base speed
    bool weather_resting = false;
    double weather_rest_target_km = -1.0;  // <0: none
  };

  struct ServiceJob {
    std::string request_id;
    AgentId assignee;
    AgentId vehicle;
    HelpKind kind = HelpKind::Police;
    double target_km = 0.0;
    std::string reason;
    bool on_station = false;
  };

  void handle(SimEvent& ev);
  void on_depart(SimEvent& ev);
  void on_checkpoint(SimEvent& ev);
  void on_break(SimEvent& ev);
  void on_refuel_start(SimEvent& ev);
  void on_refuel_end(SimEvent& ev);
  void on_rest_start(SimEvent& ev);
  void on_rest_end(SimEvent& ev);
  void on_breakdown(SimEvent& ev);
  void on_help_requested(SimEvent& ev);
  void on_van_arrived(SimEvent& ev);
  void on_service_completed(SimEvent& ev);
  void on_heartbeat(SimEvent& ev);
  void on_weather_update(SimEvent& ev);
  void on_arrived(SimEvent& ev);

  void schedule_leg(VehicleRuntime& rt, SimTime start);
  void setup_trip(VehicleRuntime& rt, SimTime depart);
  double remaining_break_hours(const VehicleRuntime& rt) const;
  double position_at(const VehicleRuntime& rt, SimTime t) const;
  bool silenced(const AgentId& vehicle, SimTime t) const;
  double severity_at(double km) const;
  double severity_over(double from_km, double to_km) const;
  const RestAreaState* nearest_rest_ahead(double km) const;

  bool try_assign(const HelpRequest& req, SimTime t);
  void start_van_job(PoliceVanState& van, const HelpRequest& req, SimTime t,
                     bool via_transfer);
  void start_unit_job(ServiceUnitState& unit, const HelpRequest& req, SimTime t,
                      ServiceMode mode);
  void drain_queue(SimTime t);
  PoliceVanState* van_by_id(const AgentId& id);
  ServiceUnitState* unit_by_id(const AgentId& id);
  TripCounters* counters_for(const AgentId& vehicle);

  ScenarioConfig cfg_;
  Route route_;
  SimEngine engine_;
  std::map<AgentId, VehicleRuntime> vehicles_;
  std::vector<PoliceVanState> vans_;
  std::vector<ServiceUnitState> units_;
  std::vector<FuelStationState> stations_;  // sorted by route_km
  std::vector<RestAreaState> rests_;        // sorted by route_km
  ShipmentManagerState manager_;
  std::vector<WeatherUpdateSpec> weather_log_;  // applied updates, latest wins
  std::map<std::string, ServiceJob> jobs_;
  bool heartbeat_running_ = false;
};

}  // namespace lrsim
