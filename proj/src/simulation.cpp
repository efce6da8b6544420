#include "lrsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrsim/dispatch.hpp"
#include "lrsim/error.hpp"
#include "lrsim/monitoring.hpp"

namespace lrsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-9;

}  // namespace

Simulation::Simulation(ScenarioConfig cfg)
    : cfg_(std::move(cfg)), route_(cfg_.route.make_route()), engine_(cfg_.seed) {
  for (const VehicleSpec& spec : cfg_.vehicles) {
    VehicleRuntime rt;
    rt.spec = spec;
    rt.v = spec.initial_state();
    vehicles_.emplace(spec.id, std::move(rt));
  }
  vans_ = cfg_.police_vans;
  units_ = cfg_.service_units;
  stations_ = cfg_.fuel_stations;
  rests_ = cfg_.rest_areas;
  auto by_km = [](const auto& a, const auto& b) {
    if (a.route_km != b.route_km) return a.route_km < b.route_km;
    return a.id < b.id;
  };
  std::sort(stations_.begin(), stations_.end(), by_km);
  std::sort(rests_.begin(), rests_.end(), by_km);
}

RunResult Simulation::run() {
  // Weather goes in first so a forecast at t equals what a vehicle departing
  // at t plans with.
  for (const WeatherUpdateSpec& w : cfg_.weather.updates) {
    EventPayload p;
    p.set("severity", w.severity);
    p.set("start_km", w.start_km);
    p.set("end_km", w.end_km);
    engine_.schedule(w.time, EventKind::WeatherUpdate, "weather", std::move(p));
  }

  for (const VehicleSpec& spec : cfg_.vehicles)
    engine_.schedule(spec.depart_time, EventKind::Depart, spec.id);

  for (const ScriptedRequestSpec& s : cfg_.scripted_requests) {
    HelpRequest req;
    req.vehicle_id = s.vehicle;
    req.kind = s.kind;
    req.position_km = s.position_km;
    req.severity = s.severity;
    EventPayload p = encode_help_request(req);
    p.set("reason", "scripted");
    engine_.schedule(s.time, EventKind::HelpRequested, s.vehicle, std::move(p));
  }

  engine_.run_until(cfg_.horizon_hours, [this](SimEvent& ev) { handle(ev); });

  RunResult res;
  res.trace = engine_.trace();
  res.metrics = metrics_from_trace(res.trace);
  for (const HelpRequest& req : manager_.pending_requests)
    res.pending_request_ids.push_back(req.request_id);
  return res;
}

void Simulation::handle(SimEvent& ev) {
  switch (ev.kind) {
    case EventKind::Depart: on_depart(ev); break;
    case EventKind::CheckpointPassed: on_checkpoint(ev); break;
    case EventKind::MealBreak:
    case EventKind::RefreshmentBreak: on_break(ev); break;
    case EventKind::RefuelStart: on_refuel_start(ev); break;
    case EventKind::RefuelEnd: on_refuel_end(ev); break;
    case EventKind::RestStart: on_rest_start(ev); break;
    case EventKind::RestEnd: on_rest_end(ev); break;
    case EventKind::Breakdown: on_breakdown(ev); break;
    case EventKind::HelpRequested: on_help_requested(ev); break;
    case EventKind::VanArrived: on_van_arrived(ev); break;
    case EventKind::ServiceCompleted: on_service_completed(ev); break;
    case EventKind::Heartbeat: on_heartbeat(ev); break;
    case EventKind::WeatherUpdate: on_weather_update(ev); break;
    case EventKind::Arrived: on_arrived(ev); break;
    case EventKind::VanAssigned:
    case EventKind::SignalLost:
      if (ev.kind == EventKind::SignalLost)
        if (TripCounters* c = counters_for(ev.subject)) ++c->threats;
      break;
    case EventKind::AlarmRaised: break;
  }
}

// --- trip setup and movement ----------------------------------------------

void Simulation::setup_trip(VehicleRuntime& rt, SimTime depart) {
  rt.depart_time = depart;
  rt.driven_hours = 0.0;
  rt.next_mark = 0;
  rt.marks.clear();
  rt.rest_scale = 1.0;
  rt.recovery_speed_kmh = 0.0;

  const auto& cps = route_.checkpoints();
  const auto& speeds = route_.segment_speeds();
  double drive = 0.0;
  std::vector<double> drive_to(cps.size(), 0.0);
  for (std::size_t k = 1; k < cps.size(); ++k) {
    drive += (cps[k].cumulative_km - cps[k - 1].cumulative_km) / speeds[k - 1];
    drive_to[k] = drive;
  }
  rt.planned_driving_hours = drive;

  const BreakPolicy& bp = cfg_.breaks;
  const double days = round2(drive / 24.0);
  auto add_series = [&](double count, double each_hours, EventKind kind) {
    if (count <= 0.0 || each_hours <= 0.0) return;
    const int n = static_cast<int>(std::ceil(count - kEps));
    for (int k = 1; k <= n; ++k) {
      BreakMark m;
      m.at_driving_hour = (k - 0.5) * drive / n;
      m.duration_hours = (k < n ? 1.0 : count - (n - 1)) * each_hours;
      m.kind = kind;
      rt.marks.push_back(m);
    }
  };
  add_series(days * bp.meals_per_day, bp.meal_hours, EventKind::MealBreak);
  add_series(days * bp.refreshments_per_day, bp.refreshment_hours, EventKind::RefreshmentBreak);
  add_series(bp.fuel_stops, bp.fuel_stop_hours, EventKind::RefuelStart);
  std::stable_sort(rt.marks.begin(), rt.marks.end(),
                   [](const BreakMark& a, const BreakMark& b) {
                     return a.at_driving_hour < b.at_driving_hour;
                   });

  rt.expected_elapsed.assign(cps.size(), 0.0);
  for (std::size_t j = 0; j < cps.size(); ++j) {
    double pauses = 0.0;
    for (const BreakMark& m : rt.marks)
      if (m.at_driving_hour < drive_to[j] - kEps) pauses += m.duration_hours;
    rt.expected_elapsed[j] = drive_to[j] + pauses;
  }
}

double Simulation::remaining_break_hours(const VehicleRuntime& rt) const {
  double sum = 0.0;
  for (std::size_t k = rt.next_mark; k < rt.marks.size(); ++k) {
    const BreakMark& m = rt.marks[k];
    sum += m.duration_hours * (m.kind == EventKind::RefuelStart ? 1.0 : rt.rest_scale);
  }
  return sum;
}

void Simulation::schedule_leg(VehicleRuntime& rt, SimTime start) {
  VehicleState& v = rt.v;
  if (v.status != VehicleStatus::Moving) return;
  const double len = route_.length_km();
  if (v.route_km >= len - kEps) {
    // Resuming exactly at the terminus (service completed at the route end).
    v.status = VehicleStatus::Arrived;
    EventPayload p;
    p.set("km", len);
    engine_.schedule(start, EventKind::Arrived, v.id, std::move(p));
    return;
  }

  const int next_cp = *route_.next_checkpoint_after(v.route_km);
  const double next_cp_km = route_.checkpoints()[next_cp].cumulative_km;

  // Weather first: it decides between sheltering ahead and slowing down.
  const double sev = severity_over(v.route_km, next_cp_km);
  const RestAreaState* shelter = nearest_rest_ahead(v.route_km);
  bool push_through_bad = false;
  rt.weather_rest_target_km = -1.0;
  if (adapt_to_weather(v, sev, shelter, cfg_.weather.threshold) == WeatherDecision::RestEarly) {
    rt.weather_rest_target_km = shelter->route_km;
  } else if (sev >= cfg_.weather.threshold) {
    push_through_bad = true;
  }

  double speed = rt.recovery_speed_kmh > 0.0 ? rt.recovery_speed_kmh : v.base_speed_kmh;
  if (push_through_bad) speed *= cfg_.weather.speed_factor;
  speed = std::min(speed, v.max_speed_kmh);
  if (speed <= 0.0) speed = v.base_speed_kmh;
  v.speed_kmh = speed;

  const double h_cp = (next_cp_km - v.route_km) / speed;
  double h_break = kInf;
  if (rt.next_mark < rt.marks.size())
    h_break = std::max(0.0, rt.marks[rt.next_mark].at_driving_hour - rt.driven_hours);
  double h_rest = kInf;
  if (rt.weather_rest_target_km >= 0.0)
    h_rest = std::max(0.0, rt.weather_rest_target_km - v.route_km) / speed;

  // Need-based refuel: divert when the tank will not cover the stretch to
  // the next planned fuel stop (or the route end).
  double h_refuel = kInf;
  const FuelStationState* divert_to = nullptr;
  if (v.consumption_l_per_km > 0.0 && v.fuel_liters < v.tank_capacity_liters * 0.999) {
    double target_km = len;
    for (std::size_t k = rt.next_mark; k < rt.marks.size(); ++k)
      if (rt.marks[k].kind == EventKind::RefuelStart) {
        target_km = std::min(
            len, v.route_km + (rt.marks[k].at_driving_hour - rt.driven_hours) * speed);
        break;
      }
    const double usable_km = v.fuel_liters * (1.0 - cfg_.schedule.fuel_reserve_fraction) /
                             v.consumption_l_per_km;
    if (v.route_km + usable_km < target_km - kEps) {
      std::vector<FuelStationState> ahead;
      for (const FuelStationState& s : stations_)
        if (s.route_km >= v.route_km - kEps) ahead.push_back(s);
      if (auto pick = choose_fuel_station(v, ahead, cfg_.schedule.fuel_reserve_fraction)) {
        for (const FuelStationState& s : stations_)
          if (s.id == *pick) divert_to = &s;
        if (divert_to)
          h_refuel = std::max(0.0, divert_to->route_km - v.route_km) / speed;
      }
    }
  }

  double dt;
  LegEnd end;
  if (h_rest <= h_break && h_rest <= h_refuel && h_rest <= h_cp) {
    dt = h_rest;
    end = LegEnd::WeatherRest;
  } else if (h_break <= h_refuel && h_break <= h_cp) {
    dt = h_break;
    end = LegEnd::Break;
  } else if (h_refuel <= h_cp) {
    dt = h_refuel;
    end = LegEnd::Refuel;
  } else {
    dt = h_cp;
    end = LegEnd::Checkpoint;
  }

  const double from_km = v.route_km;
  AdvanceResult res =
      advance_vehicle(v, route_, start, dt, cfg_.hazard.base_per_km, engine_.rng());
  rt.driven_hours += res.hours_used;
  rt.leg_start_time = start;
  rt.leg_start_km = from_km;
  rt.leg_speed = speed;
  rt.leg_hours = res.hours_used;
  for (SimEvent& e : res.events) engine_.schedule(std::move(e));

  rt.leg_end = LegEnd::None;
  rt.terminal_cp = -1;
  if (v.status != VehicleStatus::Moving) return;  // halt/arrival events are out already

  rt.leg_end = end;
  const SimTime t_end = start + dt;
  switch (end) {
    case LegEnd::Checkpoint:
      rt.terminal_cp = next_cp;
      break;
    case LegEnd::Break: {
      const BreakMark& m = rt.marks[rt.next_mark];
      EventPayload p;
      p.set("duration_h", m.duration_hours);
      engine_.schedule(t_end, m.kind, v.id, std::move(p));
      break;
    }
    case LegEnd::Refuel: {
      EventPayload p;
      p.set("duration_h", cfg_.breaks.fuel_stop_hours);
      p.set("station", divert_to->id);
      p.set("need", 1);
      engine_.schedule(t_end, EventKind::RefuelStart, v.id, std::move(p));
      break;
    }
    case LegEnd::WeatherRest: {
      EventPayload p;
      p.set("km", rt.weather_rest_target_km);
      engine_.schedule(t_end, EventKind::RestStart, v.id, std::move(p));
      break;
    }
    case LegEnd::None:
      break;
  }
}

// --- event handlers --------------------------------------------------------

void Simulation::on_depart(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  setup_trip(rt, ev.time);

  manager_.monitored.insert(ev.subject);
  manager_.last_heartbeat[ev.subject] = ev.time;
  manager_.last_known_km[ev.subject] = 0.0;
  manager_.alarm_latched[ev.subject] = false;

  rt.leg_start_time = ev.time;
  rt.leg_start_km = 0.0;
  rt.leg_speed = 0.0;
  rt.leg_hours = 0.0;

  rt.v.checkpoint_log.push_back({0, ev.time});
  EventPayload cp0;
  cp0.set("checkpoint", 0);
  cp0.set("km", 0.0);
  engine_.schedule(ev.time, EventKind::CheckpointPassed, ev.subject, std::move(cp0));

  const SimTime eta = update_expected_arrival(ev.time, route_.length_km(),
                                              rt.v.base_speed_kmh, remaining_break_hours(rt));
  ev.payload.set("reliability", rt.v.reliability);
  ev.payload.set("tolerance", cfg_.schedule.lateness_tolerance);
  ev.payload.set("eta_h", eta);
  manager_.expected_arrival[ev.subject] = eta;

  if (cfg_.heartbeat.enabled && !heartbeat_running_) {
    heartbeat_running_ = true;
    engine_.schedule(ev.time + cfg_.heartbeat.interval_hours, EventKind::Heartbeat,
                     manager_.id);
  }

  schedule_leg(rt, ev.time);
}

void Simulation::on_checkpoint(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  const int id = static_cast<int>(ev.payload.integer("checkpoint"));
  const double cp_km = route_.checkpoints()[static_cast<std::size_t>(id)].cumulative_km;

  const double elapsed = ev.time - rt.depart_time;
  const double expected = rt.expected_elapsed[static_cast<std::size_t>(id)];
  const ScheduleStatus st =
      schedule_status(elapsed, expected, cfg_.schedule.lateness_tolerance);
  const double speed = rt.v.speed_kmh > 0.0 ? rt.v.speed_kmh : rt.v.base_speed_kmh;
  const SimTime eta = update_expected_arrival(ev.time, route_.length_km() - cp_km, speed,
                                              remaining_break_hours(rt));
  ev.payload.set("elapsed_h", elapsed);
  ev.payload.set("expected_h", expected);
  ev.payload.set("status", to_string(st));
  ev.payload.set("eta_h", eta);
  manager_.expected_arrival[ev.subject] = eta;

  if (st == ScheduleStatus::Behind) {
    SchedulePlan plan;
    plan.lateness_tolerance = cfg_.schedule.lateness_tolerance;
    plan.rest_reduction_factor = cfg_.schedule.rest_reduction_factor;
    plan.speed_boost_cap_kmh = cfg_.schedule.speed_boost_cap_kmh;
    const double remaining_expected = rt.expected_elapsed.back() - expected;
    const RecoveryAction act =
        recovery_plan(elapsed - expected, plan, rt.v, remaining_expected);
    rt.recovery_speed_kmh = act.speed_kmh;
    rt.rest_scale = act.rest_scale;
  } else {
    rt.recovery_speed_kmh = 0.0;
    rt.rest_scale = 1.0;
  }

  if (rt.leg_end == LegEnd::Checkpoint && rt.terminal_cp == id &&
      rt.v.status == VehicleStatus::Moving)
    schedule_leg(rt, ev.time);
}

void Simulation::on_break(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  ++rt.next_mark;
  const double applied = ev.payload.num("duration_h") * rt.rest_scale;
  ev.payload.set("applied_h", applied);
  schedule_leg(rt, ev.time + applied);
}

void Simulation::on_refuel_start(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  if (!ev.payload.has("need")) ++rt.next_mark;  // scheduled stop consumes its mark
  rt.v.fuel_liters = rt.v.tank_capacity_liters;
  EventPayload done;
  done.set("km", rt.v.route_km);
  engine_.schedule(ev.time + ev.payload.num("duration_h"), EventKind::RefuelEnd,
                   ev.subject, std::move(done));
}

void Simulation::on_refuel_end(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it != vehicles_.end()) schedule_leg(it->second, ev.time);
}

void Simulation::on_rest_start(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  rt.weather_rest_target_km = -1.0;
  const double sev = severity_at(rt.v.route_km);
  if (rt.v.status == VehicleStatus::Moving && sev >= cfg_.weather.threshold) {
    rt.v.status = VehicleStatus::Resting;
    rt.weather_resting = true;
    ev.payload.set("severity", sev);
    if (TripCounters* c = counters_for(ev.subject)) ++c->threats;
  } else {
    // The sky cleared while the vehicle was still heading for shelter.
    ev.payload.set("skipped", 1);
    if (rt.v.status == VehicleStatus::Moving) schedule_leg(rt, ev.time);
  }
}

void Simulation::on_rest_end(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  rt.weather_resting = false;
  if (rt.v.status == VehicleStatus::Resting) rt.v.status = VehicleStatus::Moving;
  schedule_leg(rt, ev.time);
}

void Simulation::on_breakdown(SimEvent& ev) {
  if (TripCounters* c = counters_for(ev.subject)) {
    ++c->breakdowns;
    ++c->threats;
  }
  HelpRequest req;
  req.vehicle_id = ev.subject;
  req.kind = HelpKind::Workshop;
  req.position_km = ev.payload.num("km");
  req.severity = ev.payload.num("severity");
  EventPayload p = encode_help_request(req);
  p.set("reason", "breakdown");
  engine_.schedule(ev.time, EventKind::HelpRequested, ev.subject, std::move(p));
}

void Simulation::on_help_requested(SimEvent& ev) {
  HelpRequest req = decode_help_request(ev.payload, ev.time);
  if (req.request_id.empty()) {
    req.request_id = manager_.make_request_id();
    ev.payload.set("request", req.request_id);
  }
  if (TripCounters* c = counters_for(req.vehicle_id)) ++c->requests_issued;
  jobs_[req.request_id].reason =
      ev.payload.has("reason") ? ev.payload.str("reason") : std::string("scripted");

  if (try_assign(req, ev.time)) {
    ev.payload.set("disposition", "assigned");
  } else {
    manager_.pending_requests.push_back(req);
    ev.payload.set("disposition", "queued");
  }
}

void Simulation::on_van_arrived(SimEvent& ev) {
  const std::string& rid = ev.payload.str("request");
  auto jt = jobs_.find(rid);
  if (jt == jobs_.end()) return;
  ServiceJob& job = jt->second;
  double service_hours = cfg_.dispatch.police_service_hours;
  if (PoliceVanState* van = van_by_id(job.assignee)) {
    van->route_km = job.target_km;
  } else if (job.kind == HelpKind::Workshop) {
    service_hours = cfg_.dispatch.workshop_service_hours;
  } else if (job.kind == HelpKind::Medical) {
    service_hours = cfg_.dispatch.medical_service_hours;
  }
  EventPayload done;
  done.set("request", rid);
  done.set("vehicle", job.vehicle);
  done.set("km", job.target_km);
  engine_.schedule(ev.time + service_hours, EventKind::ServiceCompleted, job.assignee,
                   std::move(done));
}

void Simulation::on_service_completed(SimEvent& ev) {
  const std::string rid = ev.payload.str("request");
  auto jt = jobs_.find(rid);
  if (jt == jobs_.end()) return;
  const ServiceJob job = jt->second;
  jobs_.erase(jt);

  if (TripCounters* c = counters_for(job.vehicle)) ++c->requests_served;

  // A repaired or refueled vehicle gets back on the road.
  auto vt = vehicles_.find(job.vehicle);
  if (vt != vehicles_.end()) {
    VehicleRuntime& rt = vt->second;
    if (job.reason == "fuel" && rt.v.status == VehicleStatus::AwaitingHelp) {
      rt.v.fuel_liters =
          std::min(rt.v.tank_capacity_liters,
                   rt.v.fuel_liters +
                       cfg_.dispatch.rescue_fuel_fraction * rt.v.tank_capacity_liters);
      rt.v.status = VehicleStatus::Moving;
      schedule_leg(rt, ev.time);
    } else if (job.reason == "breakdown" && rt.v.status == VehicleStatus::BrokenDown) {
      rt.v.status = VehicleStatus::Moving;
      schedule_leg(rt, ev.time);
    }
  }

  if (PoliceVanState* van = van_by_id(ev.subject)) {
    if (!van->itinerary.empty()) {
      HelpRequest next = van->itinerary.front();
      van->itinerary.pop_front();
      van->current_assignment = next.request_id;
      van->active_target_km = next.position_km;
      EventPayload p;
      p.set("request", next.request_id);
      p.set("km", next.position_km);
      engine_.schedule(
          ev.time + std::abs(van->route_km - next.position_km) / van->speed_kmh,
          EventKind::VanArrived, van->id, std::move(p));
    } else {
      van->status = Availability::Available;
      van->current_assignment.reset();
    }
  } else if (ServiceUnitState* unit = unit_by_id(ev.subject)) {
    unit->status = Availability::Available;
    unit->current_assignment.reset();
  }

  drain_queue(ev.time);
}

void Simulation::on_heartbeat(SimEvent& ev) {
  int beacons = 0;
  for (const AgentId& vid : manager_.monitored) {
    if (silenced(vid, ev.time)) continue;
    auto it = vehicles_.find(vid);
    if (it == vehicles_.end()) continue;
    manager_.last_heartbeat[vid] = ev.time;
    manager_.last_known_km[vid] = position_at(it->second, ev.time);
    manager_.alarm_latched[vid] = false;  // beacon re-arms the alarm
    ++beacons;
  }
  ev.payload.set("beacons", beacons);

  for (SimEvent& alarm_ev :
       heartbeat_monitor(manager_, ev.time, cfg_.heartbeat.interval_hours,
                         cfg_.heartbeat.missed_limit))
    engine_.schedule(std::move(alarm_ev));

  // Keep ticking while the manager still watches someone. This has to read
  // the manager's observed view (cleared by the Arrived event), not vehicle
  // state, which is mutated ahead of time when the final leg is planned.
  if (!manager_.monitored.empty()) {
    engine_.schedule(ev.time + cfg_.heartbeat.interval_hours, EventKind::Heartbeat,
                     manager_.id);
  } else {
    heartbeat_running_ = false;  // a later departure restarts the chain
  }
}

void Simulation::on_weather_update(SimEvent& ev) {
  WeatherUpdateSpec w;
  w.time = ev.time;
  w.severity = ev.payload.num("severity");
  w.start_km = ev.payload.num("start_km");
  w.end_km = ev.payload.num("end_km");
  weather_log_.push_back(w);

  for (auto& [id, rt] : vehicles_) {
    if (!rt.weather_resting) continue;
    if (severity_at(rt.v.route_km) < cfg_.weather.threshold) {
      rt.weather_resting = false;  // release; RestEnd resumes the trip
      EventPayload p;
      p.set("km", rt.v.route_km);
      engine_.schedule(ev.time, EventKind::RestEnd, id, std::move(p));
    }
  }
}

void Simulation::on_arrived(SimEvent& ev) {
  auto it = vehicles_.find(ev.subject);
  if (it == vehicles_.end()) return;
  VehicleRuntime& rt = it->second;
  ev.payload.set("trip_h", ev.time - rt.depart_time);
  manager_.monitored.erase(ev.subject);
  manager_.expected_arrival.erase(ev.subject);
}

// --- dispatch --------------------------------------------------------------

bool Simulation::try_assign(const HelpRequest& req, SimTime t) {
  if (req.kind == HelpKind::Police) {
    PoliceVanState* covering = nullptr;
    double covering_d = kInf;
    for (PoliceVanState& van : vans_) {
      if (req.position_km < van.coverage_start_km - kEps ||
          req.position_km > van.coverage_end_km + kEps)
        continue;
      const double d = std::abs(van.route_km - req.position_km);
      if (!covering || d < covering_d || (d == covering_d && van.id < covering->id)) {
        covering = &van;
        covering_d = d;
      }
    }
    bool via_transfer = false;
    if (covering) {
      DispatchDecision dec = van_step(*covering, req, cfg_.dispatch.corridor_km);
      if (dec.outcome == DispatchOutcome::AssignedDirect) {
        start_van_job(*covering, req, t, false);
        return true;
      }
      if (dec.outcome == DispatchOutcome::AssignedOnWay) {
        ServiceJob& job = jobs_[req.request_id];
        job.request_id = req.request_id;
        job.assignee = covering->id;
        job.vehicle = req.vehicle_id;
        job.kind = req.kind;
        job.target_km = req.position_km;
        EventPayload p;
        p.set("request", req.request_id);
        p.set("vehicle", req.vehicle_id);
        p.set("assignee", covering->id);
        p.set("km", req.position_km);
        p.set("outcome", to_string(DispatchOutcome::AssignedOnWay));
        engine_.schedule(t, EventKind::VanAssigned, covering->id, std::move(p));
        return true;
      }
      via_transfer = true;  // engaged and not on its way: hand off
    }
    DispatchDecision dec = transfer_request(req, vans_);
    if (dec.outcome == DispatchOutcome::AssignedDirect && dec.assignee) {
      start_van_job(*van_by_id(*dec.assignee), req, t, via_transfer);
      return true;
    }
    return false;
  }

  // Workshop / medical: nearest free unit of the right trade; severe faults
  // need a unit that can come out to the vehicle.
  const ServiceUnitKind want =
      req.kind == HelpKind::Medical ? ServiceUnitKind::Medical : ServiceUnitKind::Workshop;
  const bool need_mobile = req.severity >= cfg_.dispatch.severity_threshold;
  ServiceUnitState* pick = nullptr;
  double pick_d = kInf;
  for (ServiceUnitState& unit : units_) {
    if (unit.kind != want || unit.status != Availability::Available) continue;
    if (need_mobile && !unit.mobile) continue;
    const double d = std::abs(unit.route_km - req.position_km);
    if (!pick || d < pick_d || (d == pick_d && unit.id < pick->id)) {
      pick = &unit;
      pick_d = d;
    }
  }
  if (!pick) return false;
  start_unit_job(*pick, req, t,
                 triage_service(req, *pick, cfg_.dispatch.severity_threshold));
  return true;
}

void Simulation::start_van_job(PoliceVanState& van, const HelpRequest& req, SimTime t,
                               bool via_transfer) {
  ServiceJob& job = jobs_[req.request_id];
  job.request_id = req.request_id;
  job.assignee = van.id;
  job.vehicle = req.vehicle_id;
  job.kind = req.kind;
  job.target_km = req.position_km;

  EventPayload p;
  p.set("request", req.request_id);
  p.set("vehicle", req.vehicle_id);
  p.set("assignee", van.id);
  p.set("km", req.position_km);
  p.set("outcome", to_string(DispatchOutcome::AssignedDirect));
  if (via_transfer) p.set("via_transfer", 1);
  engine_.schedule(t, EventKind::VanAssigned, van.id, std::move(p));

  EventPayload arr;
  arr.set("request", req.request_id);
  arr.set("km", req.position_km);
  engine_.schedule(t + std::abs(van.route_km - req.position_km) / van.speed_kmh,
                   EventKind::VanArrived, van.id, std::move(arr));
}

void Simulation::start_unit_job(ServiceUnitState& unit, const HelpRequest& req, SimTime t,
                                ServiceMode mode) {
  unit.status = Availability::Engaged;
  unit.current_assignment = req.request_id;
  ServiceJob& job = jobs_[req.request_id];
  job.request_id = req.request_id;
  job.assignee = unit.id;
  job.vehicle = req.vehicle_id;
  job.kind = req.kind;
  job.target_km = req.position_km;
  job.on_station = mode == ServiceMode::OnStation;

  EventPayload p;
  p.set("request", req.request_id);
  p.set("vehicle", req.vehicle_id);
  p.set("assignee", unit.id);
  p.set("km", req.position_km);
  p.set("outcome", to_string(DispatchOutcome::AssignedDirect));
  p.set("mode", mode == ServiceMode::OffStation ? "off_station" : "on_station");
  engine_.schedule(t, EventKind::VanAssigned, unit.id, std::move(p));

  if (mode == ServiceMode::OffStation) {
    EventPayload arr;
    arr.set("request", req.request_id);
    arr.set("km", req.position_km);
    engine_.schedule(t + std::abs(unit.route_km - req.position_km) / unit.speed_kmh,
                     EventKind::VanArrived, unit.id, std::move(arr));
    return;
  }

  // On-station: the vehicle is brought in at limping speed, serviced, and
  // released; its route progress is unaffected by the detour.
  double limp_base = unit.speed_kmh;
  auto vt = vehicles_.find(req.vehicle_id);
  if (vt != vehicles_.end()) limp_base = vt->second.v.base_speed_kmh;
  const double tow_hours = std::abs(unit.route_km - req.position_km) /
                           (cfg_.dispatch.limp_speed_factor * limp_base);
  const double service_hours = req.kind == HelpKind::Medical
                                   ? cfg_.dispatch.medical_service_hours
                                   : cfg_.dispatch.workshop_service_hours;
  EventPayload done;
  done.set("request", req.request_id);
  done.set("vehicle", req.vehicle_id);
  done.set("km", req.position_km);
  engine_.schedule(t + tow_hours + service_hours, EventKind::ServiceCompleted, unit.id,
                   std::move(done));
}

void Simulation::drain_queue(SimTime t) {
  while (!manager_.pending_requests.empty()) {
    const HelpRequest& head = manager_.pending_requests.front();
    if (!try_assign(head, t)) break;  // strict FIFO: a stuck head waits
    manager_.pending_requests.pop_front();
  }
}

// --- lookups and environment ----------------------------------------------

PoliceVanState* Simulation::van_by_id(const AgentId& id) {
  for (PoliceVanState& van : vans_)
    if (van.id == id) return &van;
  return nullptr;
}

ServiceUnitState* Simulation::unit_by_id(const AgentId& id) {
  for (ServiceUnitState& unit : units_)
    if (unit.id == id) return &unit;
  return nullptr;
}

TripCounters* Simulation::counters_for(const AgentId& vehicle) {
  if (!vehicles_.count(vehicle)) return nullptr;
  return &manager_.trip_history[vehicle];
}

double Simulation::position_at(const VehicleRuntime& rt, SimTime t) const {
  const double dt = std::clamp(t - rt.leg_start_time, 0.0, rt.leg_hours);
  return std::min(rt.leg_start_km + dt * rt.leg_speed, rt.v.route_km);
}

bool Simulation::silenced(const AgentId& vehicle, SimTime t) const {
  for (const SilenceWindow& w : cfg_.heartbeat.silences)
    if (w.vehicle == vehicle && t >= w.from && t < w.until) return true;
  return false;
}

double Simulation::severity_at(double km) const {
  for (auto it = weather_log_.rbegin(); it != weather_log_.rend(); ++it)
    if (km >= it->start_km && km < it->end_km) return it->severity;
  return 0.0;
}

double Simulation::severity_over(double from_km, double to_km) const {
  if (to_km < from_km) std::swap(from_km, to_km);
  double sev = std::max(severity_at(from_km), severity_at(to_km));
  for (const WeatherUpdateSpec& w : weather_log_) {
    if (w.start_km > from_km && w.start_km < to_km)
      sev = std::max(sev, severity_at(w.start_km));
    if (w.end_km > from_km && w.end_km < to_km) sev = std::max(sev, severity_at(w.end_km));
  }
  return sev;
}

const RestAreaState* Simulation::nearest_rest_ahead(double km) const {
  for (const RestAreaState& r : rests_)
    if (r.route_km >= km - kEps) return &r;
  return nullptr;
}

}  // namespace lrsim
