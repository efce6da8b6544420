// Acceptance gate for the simulator. Each criterion prints one line,
// [PASS] or [FAIL], and the process exits nonzero if any criterion fails.
// Tolerances and time limits are pinned here, next to the checks they govern.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lrsim/dispatch.hpp"
#include "lrsim/monitoring.hpp"
#include "lrsim/scenario.hpp"
#include "lrsim/simulation.hpp"
#include "lrsim/trace_io.hpp"

using namespace lrsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

BreakPolicy reference_breaks() {
  BreakPolicy bp;
  bp.meals_per_day = 3;
  bp.meal_hours = 0.5;
  bp.refreshments_per_day = 6;
  bp.refreshment_hours = 0.25;
  bp.fuel_stops = 5;
  bp.fuel_stop_hours = 0.25;
  return bp;
}

std::string scenario_path() {
  return std::string(LRSIM_SCENARIO_DIR) + "/cpec.json";
}

// --- 1: closed-form planner reproduces the reference trip figures ----------

void criterion_1() {
  constexpr double kTol = 0.005;
  constexpr double kWallLimit = 1.0;
  const auto t0 = Clock::now();
  const TripPlan plan = plan_trip_time(2442.0, 50.0, reference_breaks());
  const double wall = seconds_since(t0);

  const bool ok = std::abs(plan.driving_hours - 48.84) <= kTol &&
                  std::abs(plan.driving_days - 2.04) <= kTol &&
                  std::abs(plan.total_hours - 56.21) <= kTol &&
                  std::abs(plan.total_days - 2.34) <= kTol && wall < kWallLimit;
  report(1, ok,
         fmt("planner 2442 km @ 50 km/h -> %.4f h total (want 56.21 +/- 0.005), "
             "%.3f s wall",
             plan.total_hours, wall));
}

// --- 2: reference scenario end to end --------------------------------------

void criterion_2() {
  constexpr double kTol = 0.01;
  constexpr double kWallLimit = 5.0;
  const auto t0 = Clock::now();
  ScenarioConfig cfg = load_scenario_file(scenario_path());
  Simulation sim(cfg);
  RunResult res = sim.run();
  const double wall = seconds_since(t0);

  bool ok = res.metrics.size() == 1 && res.metrics[0].arrived &&
            std::abs(res.metrics[0].trip_duration_hours - 56.21) <= kTol &&
            wall < kWallLimit;
  const double got =
      res.metrics.empty() ? -1.0 : res.metrics[0].trip_duration_hours;
  report(2, ok,
         fmt("simulated reference trip %.4f h (want 56.21 +/- 0.01), %.3f s wall",
             got, wall));
}

// --- 3: checkpoint deltas telescope exactly --------------------------------

void criterion_3() {
  std::mt19937_64 gen(301);
  std::uniform_real_distribution<double> step(0.01, 9.0);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<CheckpointRecord> log;
    double t = step(gen);
    const int n = 2 + static_cast<int>(gen() % 24);
    for (int i = 0; i < n; ++i) {
      log.push_back({i, t});
      t += step(gen);
    }
    const double direct = log.back().observed_time - log.front().observed_time;
    if (total_time(log) != direct) ++bad;  // exact equality, by construction
  }
  report(3, bad == 0,
         fmt("1000 random checkpoint logs, %.0f with total != last - first", bad));
}

// --- 4: departure ETA matches simulated arrival on quiet runs --------------

void criterion_4() {
  constexpr double kTol = 1e-6;
  std::mt19937_64 gen(401);
  std::uniform_real_distribution<double> seg_km(20.0, 250.0);
  std::uniform_real_distribution<double> spd(30.0, 90.0);
  int bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int ncp = 2 + static_cast<int>(gen() % 5);
    const double speed = spd(gen);
    ScenarioConfig cfg;
    cfg.seed = 400 + static_cast<std::uint64_t>(trial);
    cfg.horizon_hours = 5000.0;
    cfg.route.mode = CoordMode::Grid;
    double km = 0.0;
    for (int i = 0; i < ncp; ++i) {
      cfg.route.checkpoints.push_back({i, {km, 0.0, CoordMode::Grid}, km});
      if (i + 1 < ncp) {
        km += seg_km(gen);
        cfg.route.segment_speeds.push_back(speed);
      }
    }
    VehicleSpec v;
    v.id = "t1";
    v.base_speed_kmh = speed;
    v.max_speed_kmh = speed + 20.0;
    v.consumption_l_per_km = 0.0;  // quiet run: no refuelling, no breaks
    cfg.vehicles.push_back(v);
    cfg.heartbeat.enabled = false;

    Simulation sim(cfg);
    RunResult res = sim.run();
    double eta = -1.0, arrival = -2.0;
    for (const SimEvent& ev : res.trace) {
      if (ev.kind == EventKind::Depart) eta = ev.payload.num("eta_h");
      if (ev.kind == EventKind::Arrived) arrival = ev.time;
    }
    const double err = std::abs(eta - arrival);
    worst = std::max(worst, err);
    if (!(err <= kTol)) ++bad;
  }
  report(4, bad == 0,
         fmt("100 quiet routes, worst |eta - arrival| = %.3g h (limit 1e-6)",
             worst));
}

// --- 5: dispatch invariants over randomized scenarios ----------------------

struct RequestLife {
  std::size_t requested_at = 0;   // trace index of HelpRequested
  double requested_time = -1.0;
  std::string disposition;
  int assigned_count = 0;
  std::size_t assigned_at = 0;
  double assigned_time = -1.0;
  int arrived_count = 0;
  double arrived_time = -1.0;
  int completed_count = 0;
  double completed_time = -1.0;
};

std::string check_dispatch_invariants(const RunResult& res) {
  std::map<std::string, RequestLife> lives;
  std::map<AgentId, int> van_arrived, van_completed;

  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    const SimEvent& ev = res.trace[i];
    if (!ev.payload.has("request")) continue;
    const std::string rid = ev.payload.str("request");
    RequestLife& life = lives[rid];
    switch (ev.kind) {
      case EventKind::HelpRequested:
        life.requested_at = i;
        life.requested_time = ev.time;
        life.disposition = ev.payload.has("disposition")
                               ? ev.payload.str("disposition")
                               : std::string{};
        break;
      case EventKind::VanAssigned:
        if (++life.assigned_count == 1) {
          life.assigned_at = i;
          life.assigned_time = ev.time;
        }
        break;
      case EventKind::VanArrived:
        ++life.arrived_count;
        life.arrived_time = ev.time;
        ++van_arrived[ev.subject];
        break;
      case EventKind::ServiceCompleted:
        ++life.completed_count;
        life.completed_time = ev.time;
        if (++van_completed[ev.subject] > van_arrived[ev.subject])
          return "van " + ev.subject + " completed a job it never arrived at";
        break;
      default:
        break;
    }
  }

  const std::set<std::string> pending(res.pending_request_ids.begin(),
                                      res.pending_request_ids.end());
  std::vector<const RequestLife*> queued_then_assigned;
  for (const auto& [rid, life] : lives) {
    if (life.requested_time < 0.0) return "request " + rid + " never announced";
    if (life.assigned_count > 1) return "request " + rid + " assigned twice";
    const bool is_pending = pending.count(rid) > 0;
    if (is_pending && life.assigned_count != 0)
      return "request " + rid + " both pending and assigned";
    if (!is_pending && life.assigned_count != 1)
      return "request " + rid + " neither assigned nor pending";
    if (life.completed_count > 0) {
      if (life.arrived_count == 0 || life.arrived_time > life.completed_time)
        return "request " + rid + " completed before anyone arrived";
      if (life.assigned_time > life.arrived_time)
        return "request " + rid + " arrived before assignment";
    }
    if (life.assigned_count == 1 && life.assigned_time < life.requested_time)
      return "request " + rid + " assigned before it was made";
    if (life.disposition == "queued" && life.assigned_count == 1)
      queued_then_assigned.push_back(&life);
  }

  // Head-blocking FIFO: queued requests leave the queue in announcement order.
  std::sort(queued_then_assigned.begin(), queued_then_assigned.end(),
            [](const RequestLife* a, const RequestLife* b) {
              return a->requested_at < b->requested_at;
            });
  for (std::size_t i = 1; i < queued_then_assigned.size(); ++i)
    if (queued_then_assigned[i - 1]->assigned_at >
        queued_then_assigned[i]->assigned_at)
      return "queued requests assigned out of order";
  return {};
}

ScenarioConfig dispatch_scenario(std::uint64_t k) {
  std::mt19937_64 gen(9000 + k);
  std::uniform_real_distribution<double> pos01(0.0, 1.0);
  ScenarioConfig cfg;
  cfg.seed = 9000 + k;
  cfg.horizon_hours = 100.0;
  cfg.route.mode = CoordMode::Grid;
  cfg.route.checkpoints = {{0, {0, 0, CoordMode::Grid}, 0.0},
                           {1, {300, 0, CoordMode::Grid}, 300.0}};
  cfg.route.segment_speeds = {60.0};
  cfg.heartbeat.enabled = false;
  for (int i = 0; i < 3; ++i) {
    PoliceVanState van;
    van.id = "pv-" + std::to_string(i + 1);
    van.coverage_start_km = 100.0 * i;
    van.coverage_end_km = 100.0 * (i + 1);
    van.route_km = van.coverage_start_km + 100.0 * pos01(gen);
    cfg.police_vans.push_back(van);
  }
  const int n = 2 + static_cast<int>(gen() % 5);
  std::vector<double> times;
  for (int i = 0; i < n; ++i) times.push_back(8.0 * pos01(gen));
  std::sort(times.begin(), times.end());
  for (int i = 0; i < n; ++i) {
    ScriptedRequestSpec s;
    s.time = times[static_cast<std::size_t>(i)];
    s.vehicle = "caller-" + std::to_string(i);
    s.kind = HelpKind::Police;
    s.position_km = 300.0 * pos01(gen);
    s.severity = pos01(gen);
    cfg.scripted_requests.push_back(s);
  }
  return cfg;
}

// The walkthrough shape: an engaged van is not diverted backwards, a second
// incident ahead of its corridor is transferred to the free neighbour, and a
// third with nobody free waits in the queue until the first van finishes.
std::string check_dispatch_narrative() {
  ScenarioConfig cfg;
  cfg.seed = 5;
  cfg.horizon_hours = 50.0;
  cfg.route.mode = CoordMode::Grid;
  cfg.route.checkpoints = {{0, {0, 0, CoordMode::Grid}, 0.0},
                           {1, {300, 0, CoordMode::Grid}, 300.0}};
  cfg.route.segment_speeds = {60.0};
  cfg.heartbeat.enabled = false;
  PoliceVanState a, b;
  a.id = "pv-a";
  a.route_km = 100.0;
  a.coverage_start_km = 0.0;
  a.coverage_end_km = 150.0;
  b.id = "pv-b";
  b.route_km = 200.0;
  b.coverage_start_km = 150.0;
  b.coverage_end_km = 300.0;
  cfg.police_vans = {a, b};
  cfg.scripted_requests = {{0.0, "caller-1", HelpKind::Police, 110.0, 0.3},
                           {0.1, "caller-2", HelpKind::Police, 120.0, 0.3},
                           {0.2, "caller-3", HelpKind::Police, 95.0, 0.3}};

  Simulation sim(cfg);
  RunResult res = sim.run();
  if (std::string err = check_dispatch_invariants(res); !err.empty()) return err;

  std::vector<const SimEvent*> assigned;
  std::vector<std::string> dispositions;
  for (const SimEvent& ev : res.trace) {
    if (ev.kind == EventKind::VanAssigned) assigned.push_back(&ev);
    if (ev.kind == EventKind::HelpRequested)
      dispositions.push_back(ev.payload.str("disposition"));
  }
  if (dispositions != std::vector<std::string>{"assigned", "assigned", "queued"})
    return "narrative dispositions differ";
  if (assigned.size() != 3) return "narrative expected 3 assignments";
  if (assigned[0]->subject != "pv-a" || assigned[0]->time != 0.0)
    return "first incident should engage the covering van at once";
  if (assigned[1]->subject != "pv-b" || !assigned[1]->payload.has("via_transfer"))
    return "second incident should transfer to the free neighbour";
  if (assigned[2]->subject != "pv-a" ||
      std::abs(assigned[2]->time - 0.625) > 1e-9)
    return "queued incident should go to the van that frees up at t=0.625";
  if (!res.pending_request_ids.empty()) return "narrative left pending requests";
  return {};
}

void criterion_5() {
  std::string first_error;
  int bad = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    Simulation sim(dispatch_scenario(k));
    RunResult res = sim.run();
    if (std::string err = check_dispatch_invariants(res); !err.empty()) {
      ++bad;
      if (first_error.empty())
        first_error = "scenario " + std::to_string(k) + ": " + err;
    }
  }
  if (std::string err = check_dispatch_narrative(); !err.empty()) {
    ++bad;
    if (first_error.empty()) first_error = "narrative: " + err;
  }
  report(5, bad == 0,
         bad == 0 ? "500 randomized dispatch scenarios + walkthrough hold "
                    "single-assignment, FIFO, and causality invariants"
                  : first_error);
}

// --- 6: breakdown model calibration ----------------------------------------

void criterion_6() {
  constexpr double kTol = 0.015;
  constexpr double kWallLimit = 60.0;
  const auto t0 = Clock::now();

  VehicleState v;
  v.id = "probe";
  v.reliability = 0.5;
  RandomSource rng(601);
  int hits = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i)
    if (sample_breakdown(v, 100.0, 0.01, rng)) ++hits;
  const double observed = static_cast<double>(hits) / trials;
  const double expected = 1.0 - std::exp(-0.5);  // 0.3935 at these parameters

  v.reliability = 1.0;
  int perfect_hits = 0;
  for (int i = 0; i < trials; ++i)
    if (sample_breakdown(v, 100.0, 0.01, rng)) ++perfect_hits;

  // Common random numbers per trial: occurrence counts must not increase
  // with reliability.
  const double levels[] = {0.2, 0.5, 0.8, 1.0};
  int counts[4] = {0, 0, 0, 0};
  for (int li = 0; li < 4; ++li) {
    v.reliability = levels[li];
    for (std::uint64_t s = 0; s < 1000; ++s) {
      RandomSource r(s);
      if (sample_breakdown(v, 100.0, 0.01, r)) ++counts[li];
    }
  }
  const bool monotone = counts[0] >= counts[1] && counts[1] >= counts[2] &&
                        counts[2] >= counts[3] && counts[3] == 0;

  const double wall = seconds_since(t0);
  const bool ok = std::abs(observed - expected) <= kTol && perfect_hits == 0 &&
                  monotone && wall < kWallLimit;
  report(6, ok,
         fmt("breakdown rate %.4f (want 0.3935 +/- 0.015), perfect-reliability "
             "hits %.0f, counts monotone in reliability",
             observed, static_cast<double>(perfect_hits)));
}

// --- 7: replay determinism -------------------------------------------------

void criterion_7() {
  ScenarioConfig cfg = load_scenario_file(scenario_path());
  Simulation first(cfg), second(cfg);
  const std::string t1 = emit_trace(first.run().trace, TraceFormat::JsonLines);
  const std::string t2 = emit_trace(second.run().trace, TraceFormat::JsonLines);
  ScenarioConfig reloaded = load_scenario_file(scenario_path());
  Simulation third(reloaded);
  const std::string t3 = emit_trace(third.run().trace, TraceFormat::JsonLines);

  const bool ok = !t1.empty() && t1 == t2 && t1 == t3;
  report(7, ok,
         fmt("three replays of the reference scenario emit %.0f byte traces, "
             "byte-identical: %.0f",
             static_cast<double>(t1.size()), ok ? 1.0 : 0.0));
}

// --- 8: a beacon outage raises exactly one alarm ---------------------------

void criterion_8() {
  ScenarioConfig cfg;
  cfg.seed = 8;
  cfg.horizon_hours = 50.0;
  cfg.route.mode = CoordMode::Grid;
  cfg.route.checkpoints = {{0, {0, 0, CoordMode::Grid}, 0.0},
                           {1, {100, 0, CoordMode::Grid}, 100.0}};
  cfg.route.segment_speeds = {50.0};
  VehicleSpec v;
  v.id = "t1";
  v.base_speed_kmh = 50.0;
  v.max_speed_kmh = 80.0;
  cfg.vehicles.push_back(v);
  cfg.heartbeat.silences.push_back({"t1", 0.6, 1e18});
  PoliceVanState van;
  van.id = "pv-1";
  van.route_km = 80.0;
  van.coverage_start_km = 0.0;
  van.coverage_end_km = 100.0;
  cfg.police_vans.push_back(van);

  Simulation sim(cfg);
  RunResult res = sim.run();
  int lost = 0, alarms = 0, police = 0;
  for (const SimEvent& ev : res.trace) {
    lost += ev.kind == EventKind::SignalLost ? 1 : 0;
    alarms += ev.kind == EventKind::AlarmRaised ? 1 : 0;
    police += ev.kind == EventKind::HelpRequested &&
                      ev.payload.str("help_kind") == "police"
                  ? 1
                  : 0;
  }
  const bool ok = lost == 1 && alarms == 1 && police == 1;
  report(8, ok,
         fmt("one silenced beacon -> %.0f signal-loss, %.0f alarm(s)", lost,
             alarms) +
             fmt(", %.0f police request(s); want exactly one of each", police));
}

// --- 9: selection agrees with a from-scratch oracle ------------------------

const ServiceCandidate* oracle_best(const std::vector<ServiceCandidate>& cands,
                                    double from_km, double w) {
  std::vector<const ServiceCandidate*> avail;
  for (const ServiceCandidate& c : cands)
    if (c.available) avail.push_back(&c);
  if (avail.empty()) return nullptr;

  auto better_id = [](const ServiceCandidate* x, const ServiceCandidate* y) {
    return x->agent_id < y->agent_id;
  };
  const ServiceCandidate* sup = avail[0];
  for (const ServiceCandidate* c : avail)
    if (c->quality_score > sup->quality_score ||
        (c->quality_score == sup->quality_score && better_id(c, sup)))
      sup = c;
  auto dist = [&](const ServiceCandidate* c) {
    return std::abs(c->position_km - from_km);
  };
  const ServiceCandidate* near = avail[0];
  for (const ServiceCandidate* c : avail)
    if (dist(c) < dist(near) || (dist(c) == dist(near) && better_id(c, near)))
      near = c;
  if (sup == near) return sup;

  double qmin = sup->quality_score, qmax = sup->quality_score;
  double dmin = dist(near), dmax = dist(near);
  for (const ServiceCandidate* c : avail) {
    qmin = std::min(qmin, c->quality_score);
    qmax = std::max(qmax, c->quality_score);
    dmin = std::min(dmin, dist(c));
    dmax = std::max(dmax, dist(c));
  }
  const ServiceCandidate* winner = nullptr;
  double best_score = -1.0;
  for (const ServiceCandidate* c : avail) {
    const double qn =
        qmax > qmin ? (c->quality_score - qmin) / (qmax - qmin) : 1.0;
    const double pn = dmax > dmin ? (dmax - dist(c)) / (dmax - dmin) : 1.0;
    const double score = w * qn + (1.0 - w) * pn;
    if (score > best_score ||
        (score == best_score && better_id(c, winner)))
      winner = c, best_score = score;
  }
  return winner;
}

void criterion_9() {
  std::mt19937_64 gen(901);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int bad = 0;
  std::string first_error;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(gen() % 9);  // includes empty sets
    std::vector<ServiceCandidate> cands;
    for (int i = 0; i < n; ++i) {
      ServiceCandidate c;
      c.agent_id = "c" + std::to_string(i);
      // Round half the draws so ties actually happen.
      const double q = 10.0 * u01(gen);
      c.quality_score = gen() % 2 ? std::floor(q) : q;
      const double p = 500.0 * u01(gen);
      c.position_km = gen() % 2 ? std::floor(p / 50.0) * 50.0 : p;
      c.available = u01(gen) < 0.8;
      cands.push_back(c);
    }
    const double from = 500.0 * u01(gen);
    const double w = trial % 3 == 0 ? (trial % 2 ? 0.0 : 1.0) : u01(gen);

    const ServiceCandidate* got = best_choice(cands, from, w);
    const ServiceCandidate* want = oracle_best(cands, from, w);
    if (got != want) {
      ++bad;
      if (first_error.empty())
        first_error = "trial " + std::to_string(trial) + ": picked " +
                      (got ? got->agent_id : "none") + ", oracle " +
                      (want ? want->agent_id : "none");
      continue;
    }

    // Invariance: positive-affine quality and distances scaled about from_km
    // leave the normalized ranking alone.
    if (!got) continue;
    std::vector<ServiceCandidate> scaled = cands;
    for (ServiceCandidate& c : scaled) {
      c.quality_score = 3.0 * c.quality_score + 2.0;
      c.position_km = from + 2.0 * (c.position_km - from);
    }
    const ServiceCandidate* again = best_choice(scaled, from, w);
    if (!again || again->agent_id != got->agent_id) {
      ++bad;
      if (first_error.empty())
        first_error =
            "trial " + std::to_string(trial) + ": rescaling changed the pick";
    }
  }
  report(9, bad == 0,
         bad == 0 ? "1000 selection trials match the oracle and survive rescaling"
                  : first_error);
}

}  // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
  } catch (const std::exception& e) {
    std::printf("[FAIL] unexpected exception: %s\n", e.what());
    return 2;
  }
  if (g_failures == 0) std::printf("all 9 acceptance criteria hold\n");
  return g_failures == 0 ? 0 : 1;
}
