#pragma once

#include <string>
#include <vector>

#include "lrsim/event.hpp"

namespace lrsim {

/// Actual vs expected timing for one checkpoint-to-checkpoint segment.
struct SegmentTiming {
  int from_id = 0;
  int to_id = 0;
  double actual_hours = 0.0;
  double expected_hours = 0.0;
  std::string status;  // ahead / on_time / behind
};

struct TripMetrics {
  AgentId vehicle_id;
  bool arrived = false;
  double trip_duration_hours = 0.0;  // first-to-last observed checkpoint
  int breakdown_count = 0;
  int threats_faced_count = 0;  // breakdowns + signal losses + weather halts
  int requests_issued = 0;
  int requests_served = 0;
  int requests_queued = 0;  // issued but never assigned
  double reliability_as_configured = 0.0;
  std::vector<SegmentTiming> segments;
};

/// Rebuild per-vehicle trip metrics from a trace alone. Works on freshly run
/// and on re-loaded traces alike; vehicles are the subjects of Depart events.
std::vector<TripMetrics> metrics_from_trace(const Trace& trace);

/// Plain-text report: one row per vehicle, per-segment timing blocks, and an
/// aggregate line.
std::string render_report(const std::vector<TripMetrics>& metrics);

/// One CSV row per vehicle (segments omitted).
std::string render_report_csv(const std::vector<TripMetrics>& metrics);

}  // namespace lrsim
