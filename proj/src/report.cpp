#include "lrsim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "lrsim/monitoring.hpp"

namespace lrsim {

namespace {

struct Working {
  TripMetrics m;
  double tolerance = 0.05;
  int assigned = 0;
  std::vector<CheckpointRecord> records;
  std::vector<double> elapsed;   // annotation per record
  std::vector<double> expected;  // annotation per record
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::vector<TripMetrics> metrics_from_trace(const Trace& trace) {
  std::map<AgentId, Working> by_vehicle;

  for (const SimEvent& ev : trace) {
    if (ev.kind == EventKind::Depart) {
      Working& w = by_vehicle[ev.subject];
      w.m.vehicle_id = ev.subject;
      if (ev.payload.has("reliability"))
        w.m.reliability_as_configured = ev.payload.num("reliability");
      if (ev.payload.has("tolerance")) w.tolerance = ev.payload.num("tolerance");
    }
  }

  auto vehicle_of = [&](const EventPayload& p) -> Working* {
    if (!p.has("vehicle")) return nullptr;
    auto it = by_vehicle.find(p.str("vehicle"));
    return it == by_vehicle.end() ? nullptr : &it->second;
  };

  for (const SimEvent& ev : trace) {
    auto it = by_vehicle.find(ev.subject);
    Working* self = it == by_vehicle.end() ? nullptr : &it->second;
    switch (ev.kind) {
      case EventKind::CheckpointPassed:
        if (self) {
          self->records.push_back(
              {static_cast<int>(ev.payload.integer("checkpoint")), ev.time});
          self->elapsed.push_back(ev.payload.has("elapsed_h") ? ev.payload.num("elapsed_h") : 0.0);
          self->expected.push_back(ev.payload.has("expected_h") ? ev.payload.num("expected_h") : 0.0);
        }
        break;
      case EventKind::Breakdown:
        if (self) {
          ++self->m.breakdown_count;
          ++self->m.threats_faced_count;
        }
        break;
      case EventKind::SignalLost:
        if (self) ++self->m.threats_faced_count;
        break;
      case EventKind::RestStart:
        if (self && !ev.payload.has("skipped")) ++self->m.threats_faced_count;
        break;
      case EventKind::Arrived:
        if (self) self->m.arrived = true;
        break;
      case EventKind::HelpRequested:
        if (Working* w = vehicle_of(ev.payload)) ++w->m.requests_issued;
        break;
      case EventKind::VanAssigned:
        if (Working* w = vehicle_of(ev.payload)) ++w->assigned;
        break;
      case EventKind::ServiceCompleted:
        if (Working* w = vehicle_of(ev.payload)) ++w->m.requests_served;
        break;
      default:
        break;
    }
  }

  std::vector<TripMetrics> out;
  for (auto& [id, w] : by_vehicle) {
    if (!w.records.empty()) w.m.trip_duration_hours = total_time(w.records);
    w.m.requests_queued = std::max(0, w.m.requests_issued - w.assigned);
    for (std::size_t k = 0; k + 1 < w.records.size(); ++k) {
      SegmentTiming seg;
      seg.from_id = w.records[k].checkpoint_id;
      seg.to_id = w.records[k + 1].checkpoint_id;
      seg.actual_hours = w.elapsed[k + 1] - w.elapsed[k];
      seg.expected_hours = w.expected[k + 1] - w.expected[k];
      seg.status = to_string(
          schedule_status(seg.actual_hours, seg.expected_hours, w.tolerance));
      w.m.segments.push_back(seg);
    }
    out.push_back(std::move(w.m));
  }
  return out;
}

std::string render_report(const std::vector<TripMetrics>& metrics) {
  std::ostringstream os;
  os << "vehicle            duration_h  arrived  breakdowns  threats  issued  served  queued  reliability\n";
  double sum_duration = 0.0;
  int arrived_count = 0;
  for (const TripMetrics& m : metrics) {
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %10.2f  %7s  %10d  %7d  %6d  %6d  %6d  %11.2f\n",
                  m.vehicle_id.c_str(), m.trip_duration_hours,
                  m.arrived ? "yes" : "no", m.breakdown_count,
                  m.threats_faced_count, m.requests_issued, m.requests_served,
                  m.requests_queued, m.reliability_as_configured);
    os << line;
    sum_duration += m.trip_duration_hours;
    arrived_count += m.arrived ? 1 : 0;
  }
  for (const TripMetrics& m : metrics) {
    if (m.segments.empty()) continue;
    os << "segments " << m.vehicle_id << ":\n";
    for (const SegmentTiming& s : m.segments)
      os << "  " << s.from_id << "->" << s.to_id << "  actual " << fmt(s.actual_hours)
         << "  expected " << fmt(s.expected_hours) << "  " << s.status << "\n";
  }
  os << "vehicles " << metrics.size() << ", arrived " << arrived_count;
  if (!metrics.empty())
    os << ", mean duration_h " << fmt(sum_duration / metrics.size());
  os << "\n";
  return os.str();
}

std::string render_report_csv(const std::vector<TripMetrics>& metrics) {
  std::ostringstream os;
  os << "vehicle,duration_h,arrived,breakdowns,threats,issued,served,queued,reliability\n";
  for (const TripMetrics& m : metrics) {
    os << m.vehicle_id << ',' << fmt(m.trip_duration_hours) << ','
       << (m.arrived ? "yes" : "no") << ',' << m.breakdown_count << ','
       << m.threats_faced_count << ',' << m.requests_issued << ','
       << m.requests_served << ',' << m.requests_queued << ','
       << fmt(m.reliability_as_configured) << '\n';
  }
  return os.str();
}

}  // namespace lrsim
