#include "lrsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lrsim/error.hpp"

namespace lrsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Config, path + ": " + what);
}

std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string key_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(key_path(path, key), "required field missing");
  return *it;
}

double as_num(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double req_num(const json& obj, const std::string& path, const std::string& key) {
  return as_num(member(obj, path, key), key_path(path, key));
}

double opt_num(const json& obj, const std::string& path, const std::string& key,
               double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return as_num(*it, key_path(path, key));
}

long long opt_int(const json& obj, const std::string& path, const std::string& key,
                  long long fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(key_path(path, key), "expected an integer");
  return it->get<long long>();
}

std::string req_str(const json& obj, const std::string& path, const std::string& key) {
  const json& j = member(obj, path, key);
  if (!j.is_string()) fail(key_path(path, key), "expected a string");
  return j.get<std::string>();
}

std::string opt_str(const json& obj, const std::string& path, const std::string& key,
                    const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) fail(key_path(path, key), "expected a string");
  return it->get<std::string>();
}

bool opt_bool(const json& obj, const std::string& path, const std::string& key,
              bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) fail(key_path(path, key), "expected a boolean");
  return it->get<bool>();
}

const json& req_obj(const json& obj, const std::string& path, const std::string& key) {
  const json& j = member(obj, path, key);
  if (!j.is_object()) fail(key_path(path, key), "expected an object");
  return j;
}

std::vector<std::string> str_list(const json& obj, const std::string& path,
                                  const std::string& key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) fail(key_path(path, key), "expected an array of strings");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& e = (*it)[i];
    if (!e.is_string()) fail(item(key_path(path, key), i), "expected a string");
    out.push_back(e.get<std::string>());
  }
  return out;
}

void check_range(double v, double lo, double hi, const std::string& path) {
  if (!(v >= lo && v <= hi))
    fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) +
                   ", " + std::to_string(hi) + "]");
}

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be positive");
}

void check_non_negative(double v, const std::string& path) {
  if (!(v >= 0.0)) fail(path, "must be non-negative");
}

RouteSpec parse_route(const json& root) {
  RouteSpec spec;
  const json& route = req_obj(root, "", "route");
  const std::string mode = opt_str(route, "route", "mode", "grid");
  if (mode == "grid") spec.mode = CoordMode::Grid;
  else if (mode == "geographic") spec.mode = CoordMode::Geographic;
  else fail("route.mode", "expected \"grid\" or \"geographic\"");

  const json& cps = member(route, "route", "checkpoints");
  if (!cps.is_array()) fail("route.checkpoints", "expected an array");
  if (cps.size() < 2) fail("route.checkpoints", "a route needs at least 2 checkpoints");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const std::string cp_path = item("route.checkpoints", i);
    const json& c = cps[i];
    if (!c.is_object()) fail(cp_path, "expected an object");
    Checkpoint cp;
    const long long id = opt_int(c, cp_path, "id", static_cast<long long>(i));
    if (id != static_cast<long long>(i))
      fail(key_path(cp_path, "id"), "checkpoint ids must run 0,1,2,... in order");
    cp.id = static_cast<int>(id);
    cp.position.x = opt_num(c, cp_path, "x", 0.0);
    cp.position.y = opt_num(c, cp_path, "y", 0.0);
    cp.position.mode = spec.mode;
    if (spec.mode == CoordMode::Geographic) {
      check_range(cp.position.x, -180.0, 180.0, key_path(cp_path, "x"));
      check_range(cp.position.y, -90.0, 90.0, key_path(cp_path, "y"));
    }
    cp.cumulative_km = req_num(c, cp_path, "km");
    if (i == 0 && cp.cumulative_km != 0.0)
      fail(key_path(cp_path, "km"), "the first checkpoint must sit at km 0");
    if (i > 0 && cp.cumulative_km <= spec.checkpoints.back().cumulative_km)
      fail(key_path(cp_path, "km"), "checkpoint distances must strictly increase");
    spec.checkpoints.push_back(cp);
  }

  const json& speeds = member(route, "route", "segment_speeds");
  const std::size_t want = cps.size() - 1;
  if (speeds.is_number()) {
    const double s = speeds.get<double>();
    check_positive(s, "route.segment_speeds");
    spec.segment_speeds.assign(want, s);
  } else if (speeds.is_array()) {
    if (speeds.size() != want)
      fail("route.segment_speeds",
           "expected " + std::to_string(want) + " entries (one per segment), got " +
               std::to_string(speeds.size()));
    for (std::size_t i = 0; i < speeds.size(); ++i) {
      const std::string p = item("route.segment_speeds", i);
      const double s = as_num(speeds[i], p);
      check_positive(s, p);
      spec.segment_speeds.push_back(s);
    }
  } else {
    fail("route.segment_speeds", "expected an array or a single number");
  }
  return spec;
}

}  // namespace

VehicleState VehicleSpec::initial_state() const {
  VehicleState v;
  v.id = id;
  v.route_km = 0.0;
  v.speed_kmh = base_speed_kmh;
  v.base_speed_kmh = base_speed_kmh;
  v.max_speed_kmh = max_speed_kmh;
  v.fuel_liters = fuel_liters;
  v.tank_capacity_liters = tank_capacity_liters;
  v.consumption_l_per_km = consumption_l_per_km;
  v.reliability = reliability;
  v.load_tons = load_tons;
  v.category = category;
  v.status = VehicleStatus::Moving;
  return v;
}

ScenarioConfig load_scenario(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded())
    throw Error(ErrorCode::Config, "scenario is not well-formed JSON");
  if (!root.is_object()) throw Error(ErrorCode::Config, "scenario must be a JSON object");

  ScenarioConfig cfg;
  {
    auto it = root.find("seed");
    if (it != root.end()) {
      if (!it->is_number_integer() || it->get<long long>() < 0)
        fail("seed", "expected a non-negative integer");
      cfg.seed = it->get<std::uint64_t>();
    }
  }
  cfg.horizon_hours = opt_num(root, "", "horizon_hours", cfg.horizon_hours);
  check_positive(cfg.horizon_hours, "horizon_hours");

  cfg.route = parse_route(root);

  if (auto it = root.find("vehicles"); it != root.end()) {
    if (!it->is_array()) fail("vehicles", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("vehicles", i);
      const json& v = (*it)[i];
      if (!v.is_object()) fail(p, "expected an object");
      VehicleSpec spec;
      spec.id = req_str(v, p, "id");
      if (spec.id.empty()) fail(key_path(p, "id"), "must not be empty");
      spec.base_speed_kmh = opt_num(v, p, "base_speed_kmh", spec.base_speed_kmh);
      check_positive(spec.base_speed_kmh, key_path(p, "base_speed_kmh"));
      spec.max_speed_kmh = opt_num(v, p, "max_speed_kmh", spec.base_speed_kmh);
      if (spec.max_speed_kmh < spec.base_speed_kmh)
        fail(key_path(p, "max_speed_kmh"), "must be at least base_speed_kmh");
      spec.tank_capacity_liters = opt_num(v, p, "tank_capacity_liters", spec.tank_capacity_liters);
      check_positive(spec.tank_capacity_liters, key_path(p, "tank_capacity_liters"));
      spec.fuel_liters = opt_num(v, p, "fuel_liters", spec.tank_capacity_liters);
      check_range(spec.fuel_liters, 0.0, spec.tank_capacity_liters, key_path(p, "fuel_liters"));
      spec.consumption_l_per_km = opt_num(v, p, "consumption_l_per_km", spec.consumption_l_per_km);
      check_non_negative(spec.consumption_l_per_km, key_path(p, "consumption_l_per_km"));
      spec.reliability = opt_num(v, p, "reliability", spec.reliability);
      check_range(spec.reliability, 0.0, 1.0, key_path(p, "reliability"));
      spec.load_tons = opt_num(v, p, "load_tons", 0.0);
      check_non_negative(spec.load_tons, key_path(p, "load_tons"));
      const std::string cat = opt_str(v, p, "category", "container");
      auto parsed = vehicle_category_from_string(cat);
      if (!parsed) fail(key_path(p, "category"), "unknown category \"" + cat + "\"");
      spec.category = *parsed;
      spec.depart_time = opt_num(v, p, "depart_time", 0.0);
      check_non_negative(spec.depart_time, key_path(p, "depart_time"));
      for (const VehicleSpec& prev : cfg.vehicles)
        if (prev.id == spec.id) fail(key_path(p, "id"), "duplicate vehicle id");
      cfg.vehicles.push_back(spec);
    }
  }

  if (auto it = root.find("police_vans"); it != root.end()) {
    if (!it->is_array()) fail("police_vans", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("police_vans", i);
      const json& v = (*it)[i];
      if (!v.is_object()) fail(p, "expected an object");
      PoliceVanState van;
      van.id = req_str(v, p, "id");
      van.route_km = opt_num(v, p, "route_km", 0.0);
      van.coverage_start_km = req_num(v, p, "coverage_start_km");
      van.coverage_end_km = req_num(v, p, "coverage_end_km");
      if (!(van.coverage_start_km < van.coverage_end_km))
        fail(key_path(p, "coverage_end_km"), "coverage interval must be non-empty");
      van.speed_kmh = opt_num(v, p, "speed_kmh", van.speed_kmh);
      check_positive(van.speed_kmh, key_path(p, "speed_kmh"));
      cfg.police_vans.push_back(van);
    }
  }

  if (auto it = root.find("fuel_stations"); it != root.end()) {
    if (!it->is_array()) fail("fuel_stations", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("fuel_stations", i);
      const json& v = (*it)[i];
      if (!v.is_object()) fail(p, "expected an object");
      FuelStationState st;
      st.id = req_str(v, p, "id");
      st.route_km = req_num(v, p, "route_km");
      st.fuel_available_liters = opt_num(v, p, "fuel_available_liters", 1e9);
      check_non_negative(st.fuel_available_liters, key_path(p, "fuel_available_liters"));
      st.price_per_liter = opt_num(v, p, "price_per_liter", 1.0);
      check_positive(st.price_per_liter, key_path(p, "price_per_liter"));
      st.services = str_list(v, p, "services");
      cfg.fuel_stations.push_back(st);
    }
  }

  if (auto it = root.find("rest_areas"); it != root.end()) {
    if (!it->is_array()) fail("rest_areas", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("rest_areas", i);
      const json& v = (*it)[i];
      if (!v.is_object()) fail(p, "expected an object");
      RestAreaState ra;
      ra.id = req_str(v, p, "id");
      ra.route_km = req_num(v, p, "route_km");
      const long long cat = opt_int(v, p, "category", 1);
      if (cat < 1) fail(key_path(p, "category"), "must be at least 1");
      ra.category = static_cast<int>(cat);
      ra.services = str_list(v, p, "services");
      ra.meal_price = opt_num(v, p, "meal_price", 0.0);
      check_non_negative(ra.meal_price, key_path(p, "meal_price"));
      cfg.rest_areas.push_back(ra);
    }
  }

  if (auto it = root.find("service_units"); it != root.end()) {
    if (!it->is_array()) fail("service_units", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("service_units", i);
      const json& v = (*it)[i];
      if (!v.is_object()) fail(p, "expected an object");
      ServiceUnitState u;
      u.id = req_str(v, p, "id");
      const std::string kind = req_str(v, p, "kind");
      if (kind == "workshop") u.kind = ServiceUnitKind::Workshop;
      else if (kind == "medical") u.kind = ServiceUnitKind::Medical;
      else fail(key_path(p, "kind"), "expected \"workshop\" or \"medical\"");
      u.route_km = req_num(v, p, "route_km");
      u.mobile = opt_bool(v, p, "mobile", false);
      u.speed_kmh = opt_num(v, p, "speed_kmh", u.speed_kmh);
      check_positive(u.speed_kmh, key_path(p, "speed_kmh"));
      cfg.service_units.push_back(u);
    }
  }

  if (auto it = root.find("breaks"); it != root.end()) {
    if (!it->is_object()) fail("breaks", "expected an object");
    const json& b = *it;
    const std::string p = "breaks";
    const long long meals = opt_int(b, p, "meals_per_day", 0);
    const long long refr = opt_int(b, p, "refreshments_per_day", 0);
    const long long stops = opt_int(b, p, "fuel_stops", 0);
    if (meals < 0) fail(key_path(p, "meals_per_day"), "must be non-negative");
    if (refr < 0) fail(key_path(p, "refreshments_per_day"), "must be non-negative");
    if (stops < 0) fail(key_path(p, "fuel_stops"), "must be non-negative");
    cfg.breaks.meals_per_day = static_cast<int>(meals);
    cfg.breaks.refreshments_per_day = static_cast<int>(refr);
    cfg.breaks.fuel_stops = static_cast<int>(stops);
    cfg.breaks.meal_hours = opt_num(b, p, "meal_hours", 0.0);
    cfg.breaks.refreshment_hours = opt_num(b, p, "refreshment_hours", 0.0);
    cfg.breaks.fuel_stop_hours = opt_num(b, p, "fuel_stop_hours", 0.0);
    check_non_negative(cfg.breaks.meal_hours, key_path(p, "meal_hours"));
    check_non_negative(cfg.breaks.refreshment_hours, key_path(p, "refreshment_hours"));
    check_non_negative(cfg.breaks.fuel_stop_hours, key_path(p, "fuel_stop_hours"));
  }

  if (auto it = root.find("hazard"); it != root.end()) {
    if (!it->is_object()) fail("hazard", "expected an object");
    cfg.hazard.base_per_km = opt_num(*it, "hazard", "base_per_km", 0.0);
    check_non_negative(cfg.hazard.base_per_km, "hazard.base_per_km");
  }

  if (auto it = root.find("weather"); it != root.end()) {
    if (!it->is_object()) fail("weather", "expected an object");
    const json& w = *it;
    cfg.weather.threshold = opt_num(w, "weather", "threshold", cfg.weather.threshold);
    check_range(cfg.weather.threshold, 0.0, 1.0, "weather.threshold");
    cfg.weather.speed_factor = opt_num(w, "weather", "speed_factor", cfg.weather.speed_factor);
    if (!(cfg.weather.speed_factor > 0.0 && cfg.weather.speed_factor <= 1.0))
      fail("weather.speed_factor", "must be in (0, 1]");
    if (auto up = w.find("updates"); up != w.end()) {
      if (!up->is_array()) fail("weather.updates", "expected an array");
      for (std::size_t i = 0; i < up->size(); ++i) {
        const std::string p = item("weather.updates", i);
        const json& u = (*up)[i];
        if (!u.is_object()) fail(p, "expected an object");
        WeatherUpdateSpec spec;
        spec.time = req_num(u, p, "time");
        check_non_negative(spec.time, key_path(p, "time"));
        spec.severity = req_num(u, p, "severity");
        check_range(spec.severity, 0.0, 1.0, key_path(p, "severity"));
        spec.start_km = req_num(u, p, "start_km");
        spec.end_km = req_num(u, p, "end_km");
        if (!(spec.end_km > spec.start_km))
          fail(key_path(p, "end_km"), "zone interval must be non-empty");
        cfg.weather.updates.push_back(spec);
      }
    }
  }

  if (auto it = root.find("heartbeat"); it != root.end()) {
    if (!it->is_object()) fail("heartbeat", "expected an object");
    const json& h = *it;
    cfg.heartbeat.enabled = opt_bool(h, "heartbeat", "enabled", true);
    cfg.heartbeat.interval_hours = opt_num(h, "heartbeat", "interval_hours",
                                           cfg.heartbeat.interval_hours);
    check_positive(cfg.heartbeat.interval_hours, "heartbeat.interval_hours");
    const long long limit = opt_int(h, "heartbeat", "missed_limit", cfg.heartbeat.missed_limit);
    if (limit < 1) fail("heartbeat.missed_limit", "must be at least 1");
    cfg.heartbeat.missed_limit = static_cast<int>(limit);
    if (auto sil = h.find("silences"); sil != h.end()) {
      if (!sil->is_array()) fail("heartbeat.silences", "expected an array");
      for (std::size_t i = 0; i < sil->size(); ++i) {
        const std::string p = item("heartbeat.silences", i);
        const json& s = (*sil)[i];
        if (!s.is_object()) fail(p, "expected an object");
        SilenceWindow w;
        w.vehicle = req_str(s, p, "vehicle");
        w.from = req_num(s, p, "from");
        w.until = opt_num(s, p, "until", 1e18);
        if (!(w.until > w.from)) fail(key_path(p, "until"), "window must be non-empty");
        cfg.heartbeat.silences.push_back(w);
      }
    }
  }

  if (auto it = root.find("dispatch"); it != root.end()) {
    if (!it->is_object()) fail("dispatch", "expected an object");
    const json& d = *it;
    DispatchParams& dp = cfg.dispatch;
    dp.corridor_km = opt_num(d, "dispatch", "corridor_km", dp.corridor_km);
    check_non_negative(dp.corridor_km, "dispatch.corridor_km");
    dp.weight_quality = opt_num(d, "dispatch", "weight_quality", dp.weight_quality);
    check_range(dp.weight_quality, 0.0, 1.0, "dispatch.weight_quality");
    dp.severity_threshold = opt_num(d, "dispatch", "severity_threshold", dp.severity_threshold);
    check_range(dp.severity_threshold, 0.0, 1.0, "dispatch.severity_threshold");
    dp.police_service_hours = opt_num(d, "dispatch", "police_service_hours", dp.police_service_hours);
    check_positive(dp.police_service_hours, "dispatch.police_service_hours");
    dp.workshop_service_hours = opt_num(d, "dispatch", "workshop_service_hours", dp.workshop_service_hours);
    check_positive(dp.workshop_service_hours, "dispatch.workshop_service_hours");
    dp.medical_service_hours = opt_num(d, "dispatch", "medical_service_hours", dp.medical_service_hours);
    check_positive(dp.medical_service_hours, "dispatch.medical_service_hours");
    dp.rescue_fuel_fraction = opt_num(d, "dispatch", "rescue_fuel_fraction", dp.rescue_fuel_fraction);
    check_range(dp.rescue_fuel_fraction, 0.0, 1.0, "dispatch.rescue_fuel_fraction");
    dp.limp_speed_factor = opt_num(d, "dispatch", "limp_speed_factor", dp.limp_speed_factor);
    if (!(dp.limp_speed_factor > 0.0 && dp.limp_speed_factor <= 1.0))
      fail("dispatch.limp_speed_factor", "must be in (0, 1]");
  }

  if (auto it = root.find("schedule"); it != root.end()) {
    if (!it->is_object()) fail("schedule", "expected an object");
    const json& s = *it;
    ScheduleParams& sp = cfg.schedule;
    sp.lateness_tolerance = opt_num(s, "schedule", "lateness_tolerance", sp.lateness_tolerance);
    check_non_negative(sp.lateness_tolerance, "schedule.lateness_tolerance");
    sp.rest_reduction_factor = opt_num(s, "schedule", "rest_reduction_factor", sp.rest_reduction_factor);
    if (!(sp.rest_reduction_factor > 0.0 && sp.rest_reduction_factor <= 1.0))
      fail("schedule.rest_reduction_factor", "must be in (0, 1]");
    sp.fuel_reserve_fraction = opt_num(s, "schedule", "fuel_reserve_fraction", sp.fuel_reserve_fraction);
    if (!(sp.fuel_reserve_fraction >= 0.0 && sp.fuel_reserve_fraction < 1.0))
      fail("schedule.fuel_reserve_fraction", "must be in [0, 1)");
    sp.speed_boost_cap_kmh = opt_num(s, "schedule", "speed_boost_cap_kmh", 0.0);
    check_non_negative(sp.speed_boost_cap_kmh, "schedule.speed_boost_cap_kmh");
  }

  if (auto it = root.find("scripted_requests"); it != root.end()) {
    if (!it->is_array()) fail("scripted_requests", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = item("scripted_requests", i);
      const json& r = (*it)[i];
      if (!r.is_object()) fail(p, "expected an object");
      ScriptedRequestSpec spec;
      spec.time = req_num(r, p, "time");
      check_non_negative(spec.time, key_path(p, "time"));
      spec.vehicle = opt_str(r, p, "vehicle", "incident-" + std::to_string(i));
      const std::string kind = req_str(r, p, "kind");
      auto parsed = help_kind_from_string(kind);
      if (!parsed) fail(key_path(p, "kind"), "unknown help kind \"" + kind + "\"");
      spec.kind = *parsed;
      spec.position_km = req_num(r, p, "km");
      check_non_negative(spec.position_km, key_path(p, "km"));
      spec.severity = opt_num(r, p, "severity", 0.5);
      check_range(spec.severity, 0.0, 1.0, key_path(p, "severity"));
      cfg.scripted_requests.push_back(spec);
    }
  }

  // Cross-checks that need the whole document.
  try {
    (void)cfg.route.make_route();
  } catch (const Error& e) {
    fail("route", e.what());
  }
  const double length = cfg.route.checkpoints.back().cumulative_km;
  for (std::size_t i = 0; i < cfg.heartbeat.silences.size(); ++i) {
    const SilenceWindow& w = cfg.heartbeat.silences[i];
    bool known = false;
    for (const VehicleSpec& v : cfg.vehicles) known = known || v.id == w.vehicle;
    if (!known)
      fail(key_path(item("heartbeat.silences", i), "vehicle"),
           "no such vehicle \"" + w.vehicle + "\"");
  }
  for (std::size_t i = 0; i < cfg.scripted_requests.size(); ++i)
    if (cfg.scripted_requests[i].position_km > length)
      fail(key_path(item("scripted_requests", i), "km"), "beyond the route end");

  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

TripPlan plan_trip_time(double distance_km, double speed_kmh, const BreakPolicy& breaks) {
  if (!(distance_km > 0.0)) throw Error(ErrorCode::Invalid, "distance must be positive");
  if (!(speed_kmh > 0.0)) throw Error(ErrorCode::Invalid, "speed must be positive");
  TripPlan plan;
  plan.driving_hours = distance_km / speed_kmh;
  plan.driving_days = round2(plan.driving_hours / 24.0);
  plan.total_hours = plan.driving_days * (breaks.meals_per_day * breaks.meal_hours) +
                     plan.driving_days * (breaks.refreshments_per_day * breaks.refreshment_hours) +
                     breaks.fuel_stops * breaks.fuel_stop_hours + plan.driving_hours;
  plan.total_days = round2(plan.total_hours / 24.0);
  return plan;
}

}  // namespace lrsim
