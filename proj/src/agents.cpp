#include "lrsim/agents.hpp"

#include <algorithm>
#include <cmath>

#include "lrsim/error.hpp"

namespace lrsim {

const char* to_string(VehicleStatus s) {
  switch (s) {
    case VehicleStatus::Moving: return "moving";
    case VehicleStatus::Resting: return "resting";
    case VehicleStatus::Refueling: return "refueling";
    case VehicleStatus::BrokenDown: return "broken_down";
    case VehicleStatus::AwaitingHelp: return "awaiting_help";
    case VehicleStatus::Arrived: return "arrived";
  }
  return "?";
}

const char* to_string(HelpKind k) {
  switch (k) {
    case HelpKind::Police: return "police";
    case HelpKind::Medical: return "medical";
    case HelpKind::Workshop: return "workshop";
  }
  return "?";
}

std::optional<HelpKind> help_kind_from_string(std::string_view name) {
  if (name == "police") return HelpKind::Police;
  if (name == "medical") return HelpKind::Medical;
  if (name == "workshop") return HelpKind::Workshop;
  return std::nullopt;
}

std::optional<VehicleCategory> vehicle_category_from_string(std::string_view name) {
  if (name == "container") return VehicleCategory::Container;
  if (name == "tanker") return VehicleCategory::Tanker;
  if (name == "flatbed") return VehicleCategory::Flatbed;
  return std::nullopt;
}

std::string ShipmentManagerState::make_request_id() {
  return "rq-" + std::to_string(next_request_seq++);
}

EventPayload encode_help_request(const HelpRequest& req) {
  EventPayload p;
  p.set("request", req.request_id);
  p.set("vehicle", req.vehicle_id);
  p.set("help_kind", to_string(req.kind));
  p.set("km", req.position_km);
  p.set("severity", req.severity);
  return p;
}

HelpRequest decode_help_request(const EventPayload& payload, SimTime event_time) {
  HelpRequest req;
  req.request_id = payload.has("request") ? payload.str("request") : std::string{};
  req.vehicle_id = payload.str("vehicle");
  auto kind = help_kind_from_string(payload.str("help_kind"));
  if (!kind) throw Error(ErrorCode::Invalid, "unknown help kind in payload");
  req.kind = *kind;
  req.position_km = payload.num("km");
  req.severity = payload.has("severity") ? payload.num("severity") : 0.0;
  req.issued_at = event_time;
  return req;
}

std::optional<double> sample_breakdown(const VehicleState& v, double segment_km,
                                       double base_hazard_per_km,
                                       RandomSource& rng) {
  if (segment_km <= 0.0 || base_hazard_per_km <= 0.0) return std::nullopt;
  const double rate = (1.0 - v.reliability) * base_hazard_per_km;
  if (rate <= 0.0) return std::nullopt;
  const double p = 1.0 - std::exp(-rate * segment_km);
  if (rng.uniform01() >= p) return std::nullopt;
  // Position draw happens only when a failure occurs, so runs with reliable
  // vehicles consume exactly one draw per segment.
  return rng.uniform01() * segment_km;
}

AdvanceResult advance_vehicle(VehicleState& v, const Route& route, SimTime now,
                              double dt_hours, double base_hazard_per_km,
                              RandomSource& rng) {
  AdvanceResult out;
  if (dt_hours < 0.0) throw Error(ErrorCode::Invalid, "negative advance interval");
  if (v.status != VehicleStatus::Moving || dt_hours == 0.0) return out;
  if (v.speed_kmh <= 0.0) throw Error(ErrorCode::Invalid, "vehicle has no speed: " + v.id);

  const double remaining_route = route.length_km() - v.route_km;
  if (remaining_route <= 0.0) {
    v.status = VehicleStatus::Arrived;
    return out;
  }

  double travel_km = v.speed_kmh * dt_hours;
  travel_km = std::min(travel_km, remaining_route);

  // Fuel range caps the leg; running dry strands the vehicle mid-route.
  bool dry_tank = false;
  if (v.consumption_l_per_km > 0.0) {
    const double fuel_range = v.fuel_liters / v.consumption_l_per_km;
    if (fuel_range < travel_km) {
      travel_km = std::max(fuel_range, 0.0);
      dry_tank = true;
    }
  }

  // A failure inside the leg cuts it short at the failure point.
  bool broke = false;
  if (auto at = sample_breakdown(v, travel_km, base_hazard_per_km, rng)) {
    travel_km = *at;
    broke = true;
    dry_tank = false;
  }

  const double start_km = v.route_km;
  const double end_km = start_km + travel_km;
  const double hours = travel_km / v.speed_kmh;

  // Checkpoint crossings, inclusive at the cut point.
  for (const Checkpoint& cp : route.checkpoints()) {
    if (cp.cumulative_km <= start_km + 1e-9) continue;
    if (cp.cumulative_km > end_km + 1e-9) break;
    const SimTime t_cross = now + (cp.cumulative_km - start_km) / v.speed_kmh;
    v.checkpoint_log.push_back({cp.id, t_cross});
    SimEvent ev;
    ev.time = t_cross;
    ev.kind = EventKind::CheckpointPassed;
    ev.subject = v.id;
    ev.payload.set("checkpoint", static_cast<std::int64_t>(cp.id));
    ev.payload.set("km", cp.cumulative_km);
    out.events.push_back(std::move(ev));
  }

  v.route_km = end_km;
  v.fuel_liters = std::max(0.0, v.fuel_liters - travel_km * v.consumption_l_per_km);
  out.hours_used = hours;

  if (broke) {
    v.status = VehicleStatus::BrokenDown;
    const double severity = rng.uniform01();
    SimEvent ev;
    ev.time = now + hours;
    ev.kind = EventKind::Breakdown;
    ev.subject = v.id;
    ev.payload.set("km", v.route_km);
    ev.payload.set("severity", severity);
    out.events.push_back(std::move(ev));
    return out;
  }

  if (dry_tank) {
    v.status = VehicleStatus::AwaitingHelp;
    HelpRequest req;
    req.vehicle_id = v.id;
    req.kind = HelpKind::Workshop;
    req.position_km = v.route_km;
    req.severity = 1.0;  // stranded: always needs a mobile unit
    req.issued_at = now + hours;
    SimEvent ev;
    ev.time = req.issued_at;
    ev.kind = EventKind::HelpRequested;
    ev.subject = v.id;
    ev.payload = encode_help_request(req);
    ev.payload.set("reason", "fuel");
    out.events.push_back(std::move(ev));
    return out;
  }

  if (v.route_km >= route.length_km() - 1e-9) {
    v.status = VehicleStatus::Arrived;
    SimEvent ev;
    ev.time = now + hours;
    ev.kind = EventKind::Arrived;
    ev.subject = v.id;
    ev.payload.set("km", route.length_km());
    out.events.push_back(std::move(ev));
  }
  return out;
}

WeatherDecision adapt_to_weather(const VehicleState&, double forecast_severity,
                                 const RestAreaState* nearest_rest_ahead,
                                 double threshold) {
  if (forecast_severity >= threshold && nearest_rest_ahead != nullptr)
    return WeatherDecision::RestEarly;
  return WeatherDecision::Proceed;
}

std::vector<SimEvent> heartbeat_monitor(ShipmentManagerState& m, SimTime now,
                                        double interval_hours, int missed_limit) {
  std::vector<SimEvent> out;
  if (interval_hours <= 0.0) throw Error(ErrorCode::Invalid, "heartbeat interval must be positive");
  const double deadline = missed_limit * interval_hours;
  for (const AgentId& vid : m.monitored) {
    auto it = m.last_heartbeat.find(vid);
    if (it == m.last_heartbeat.end()) continue;  // no beacon yet: not stale, not silent
    const double silent_for = now - it->second;
    if (silent_for < deadline - 1e-9) continue;
    bool& latched = m.alarm_latched[vid];
    if (latched) continue;
    latched = true;
    const double km = m.last_known_km.count(vid) ? m.last_known_km.at(vid) : 0.0;

    SimEvent lost;
    lost.time = now;
    lost.kind = EventKind::SignalLost;
    lost.subject = vid;
    lost.payload.set("silent_hours", silent_for);
    lost.payload.set("last_known_km", km);
    out.push_back(std::move(lost));

    SimEvent alarm;
    alarm.time = now;
    alarm.kind = EventKind::AlarmRaised;
    alarm.subject = m.id;
    alarm.payload.set("vehicle", vid);
    alarm.payload.set("last_known_km", km);
    out.push_back(std::move(alarm));

    HelpRequest req;
    req.request_id = m.make_request_id();
    req.vehicle_id = vid;
    req.kind = HelpKind::Police;
    req.position_km = km;
    req.severity = 1.0;
    req.issued_at = now;
    SimEvent help;
    help.time = now;
    help.kind = EventKind::HelpRequested;
    help.subject = m.id;
    help.payload = encode_help_request(req);
    help.payload.set("reason", "alarm");
    out.push_back(std::move(help));
  }
  return out;
}

std::optional<AgentId> choose_fuel_station(const VehicleState& v,
                                           const std::vector<FuelStationState>& stations_ahead,
                                           double reserve_fraction) {
  if (v.consumption_l_per_km <= 0.0) return std::nullopt;
  const double usable = v.fuel_liters * (1.0 - reserve_fraction);
  const double reach_km = v.route_km + std::max(usable, 0.0) / v.consumption_l_per_km;
  const FuelStationState* best = nullptr;
  for (const FuelStationState& s : stations_ahead) {
    if (s.route_km < v.route_km - 1e-9) continue;
    if (s.route_km > reach_km + 1e-9) break;  // sorted ascending: nothing further is reachable
    if (s.fuel_available_liters <= 0.0) continue;
    if (!best || s.price_per_liter < best->price_per_liter - 1e-12) best = &s;
    // Equal price: keep the earlier (nearer) one, which `best` already is.
  }
  if (!best) return std::nullopt;
  return best->id;
}

ServiceMode triage_service(const HelpRequest& req, const ServiceUnitState& unit,
                           double severity_threshold) {
  if (req.severity >= severity_threshold && unit.mobile) return ServiceMode::OffStation;
  return ServiceMode::OnStation;
}

}  // namespace lrsim
