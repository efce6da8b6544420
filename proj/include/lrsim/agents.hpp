#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lrsim/event.hpp"
#include "lrsim/geo.hpp"
#include "lrsim/random.hpp"

namespace lrsim {

enum class VehicleStatus { Moving, Resting, Refueling, BrokenDown, AwaitingHelp, Arrived };
enum class VehicleCategory { Container, Tanker, Flatbed };
enum class Availability { Available, Engaged };
enum class HelpKind { Police, Medical, Workshop };
enum class ServiceUnitKind { Workshop, Medical };

const char* to_string(VehicleStatus s);
const char* to_string(HelpKind k);
std::optional<HelpKind> help_kind_from_string(std::string_view name);
std::optional<VehicleCategory> vehicle_category_from_string(std::string_view name);

/// One entry of a vehicle's checkpoint timing log (Tcp).
struct CheckpointStamp {
  int checkpoint_id = 0;
  SimTime time = 0.0;
};

struct VehicleState {
  AgentId id;
  double route_km = 0.0;
  double speed_kmh = 0.0;       // current effective speed while Moving
  double base_speed_kmh = 0.0;  // scheduled cruise speed
  double max_speed_kmh = 0.0;   // regulatory cap
  double fuel_liters = 0.0;
  double tank_capacity_liters = 0.0;
  double consumption_l_per_km = 0.0;
  double reliability = 1.0;  // in [0,1]; scales down the breakdown hazard
  double load_tons = 0.0;
  VehicleCategory category = VehicleCategory::Container;
  std::vector<CheckpointStamp> checkpoint_log;
  VehicleStatus status = VehicleStatus::Moving;
};

struct HelpRequest {
  std::string request_id;
  AgentId vehicle_id;
  HelpKind kind = HelpKind::Workshop;
  double position_km = 0.0;
  double severity = 0.0;  // in [0,1]
  SimTime issued_at = 0.0;
};

struct PoliceVanState {
  AgentId id;
  double route_km = 0.0;
  double coverage_start_km = 0.0;
  double coverage_end_km = 0.0;
  Availability status = Availability::Available;
  std::optional<std::string> current_assignment;  // request id, present iff Engaged
  double active_target_km = 0.0;                  // meaningful while Engaged
  double speed_kmh = 80.0;
  std::deque<HelpRequest> itinerary;  // on-way absorptions, served after the current one
};

struct FuelStationState {
  AgentId id;
  double route_km = 0.0;
  double fuel_available_liters = 0.0;
  double price_per_liter = 1.0;
  std::vector<std::string> services;
};

struct RestAreaState {
  AgentId id;
  double route_km = 0.0;
  int category = 1;  // ordinal quality class, >= 1
  std::vector<std::string> services;
  double meal_price = 0.0;
};

struct ServiceUnitState {
  AgentId id;
  ServiceUnitKind kind = ServiceUnitKind::Workshop;
  double route_km = 0.0;
  Availability status = Availability::Available;
  std::optional<std::string> current_assignment;  // request id, present iff Engaged
  bool mobile = false;  // can serve off-station
  double speed_kmh = 60.0;
};

/// Per-vehicle running counters the manager accumulates into trip history.
struct TripCounters {
  int breakdowns = 0;
  int threats = 0;
  int requests_issued = 0;
  int requests_served = 0;
};

struct ShipmentManagerState {
  AgentId id = "manager";
  std::map<AgentId, SimTime> last_heartbeat;
  std::map<AgentId, double> last_known_km;
  std::map<AgentId, SimTime> expected_arrival;
  std::set<AgentId> monitored;  // vehicles with a trip in progress
  std::map<AgentId, bool> alarm_latched;
  std::deque<HelpRequest> pending_requests;  // served strictly FIFO
  std::map<AgentId, TripCounters> trip_history;
  std::uint64_t next_request_seq = 0;

  std::string make_request_id();
};

// --- payload helpers -------------------------------------------------------

EventPayload encode_help_request(const HelpRequest& req);
HelpRequest decode_help_request(const EventPayload& payload, SimTime event_time);

// --- behavior --------------------------------------------------------------

struct AdvanceResult {
  std::vector<SimEvent> events;  // chronological; times in (now, now + dt]
  double hours_used = 0.0;       // may be < dt on breakdown / dry tank / arrival
};

/// Move a vehicle for dt hours of driving: burns fuel, crosses checkpoints
/// (appending to the checkpoint log with interpolated crossing times),
/// arrives at the route end, and may break down along the way per
/// sample_breakdown. On a dry tank the vehicle halts at the exhaustion
/// point and asks for a workshop; this is a modeled outcome, not a fault.
AdvanceResult advance_vehicle(VehicleState& v, const Route& route, SimTime now,
                              double dt_hours, double base_hazard_per_km,
                              RandomSource& rng);

/// Breakdown draw over one segment. Occurrence probability is
/// 1 - exp(-(1 - reliability) * hazard * segment_km); the position within the
/// segment is uniform. Returns the km offset, or nullopt.
std::optional<double> sample_breakdown(const VehicleState& v, double segment_km,
                                       double base_hazard_per_km,
                                       RandomSource& rng);

enum class WeatherDecision { Proceed, RestEarly };

/// Rest early iff the forecast is at or above the threshold and a rest area
/// lies ahead; without one the vehicle proceeds (the caller slows it down).
WeatherDecision adapt_to_weather(const VehicleState& v, double forecast_severity,
                                 const RestAreaState* nearest_rest_ahead,
                                 double threshold);

/// Staleness sweep: for every monitored vehicle silent for longer than
/// missed_limit * interval, emit SignalLost + AlarmRaised (at the last-known
/// route-km) + a police HelpRequested there. The alarm latches: no
/// duplicates while the silence persists; a fresh heartbeat re-arms it.
std::vector<SimEvent> heartbeat_monitor(ShipmentManagerState& m, SimTime now,
                                        double interval_hours, int missed_limit);

/// Cheapest station reachable on the current fuel less a reserve; ties go to
/// the nearer one. stations_ahead must be sorted by route_km ascending.
std::optional<AgentId> choose_fuel_station(const VehicleState& v,
                                           const std::vector<FuelStationState>& stations_ahead,
                                           double reserve_fraction);

enum class ServiceMode { OnStation, OffStation };

/// Off-station service iff the fault is severe enough and the unit can move;
/// otherwise the vehicle is brought to the unit.
ServiceMode triage_service(const HelpRequest& req, const ServiceUnitState& unit,
                           double severity_threshold);

}  // namespace lrsim
