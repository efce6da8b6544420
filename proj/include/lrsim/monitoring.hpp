#pragma once

#include <vector>

#include "lrsim/agents.hpp"
#include "lrsim/event.hpp"

namespace lrsim {

/// Observed checkpoint crossing, as logged by a vehicle.
struct CheckpointRecord {
  int checkpoint_id = 0;
  SimTime observed_time = 0.0;
};

/// Travel time between two logged checkpoints i < j. The interval is only
/// defined forward; asking for j <= i is an error, as is asking about a
/// checkpoint that was never crossed.
double delta_t(const std::vector<CheckpointRecord>& records, int i, int j);

/// Whole-trip travel time. Consecutive checkpoint deltas telescope, so this
/// is exactly last - first. Requires a non-empty, time-ordered log.
double total_time(const std::vector<CheckpointRecord>& records);

/// Hours to cover distance_km at speed_kmh.
double time_to_reach_checkpoint(double distance_km, double speed_kmh);

enum class ScheduleStatus { Ahead, OnTime, Behind };
const char* to_string(ScheduleStatus s);

/// Compare actual vs expected elapsed time with a symmetric relative
/// tolerance band: Behind above expected*(1+tol), Ahead below
/// expected*(1-tol), OnTime inside the band (inclusive).
ScheduleStatus schedule_status(double actual_hours, double expected_hours,
                               double tolerance);

struct SchedulePlan {
  std::vector<double> expected_segment_hours;  // indexed by segment (cp i -> i+1)
  double lateness_tolerance = 0.05;
  double rest_reduction_factor = 0.5;  // rest durations scale by this while behind
  double speed_boost_cap_kmh = 0.0;    // 0 means "no cap beyond the vehicle's max"
};

struct RecoveryAction {
  double rest_scale = 1.0;  // multiply upcoming rest durations by this
  double speed_kmh = 0.0;   // effective cruise speed to adopt
};

/// Make up lost time by trimming rests and raising speed. The boost spreads
/// the deficit over the remaining expected driving hours and is clamped to
/// the plan cap and the vehicle's maximum. Not behind => no change.
RecoveryAction recovery_plan(double behind_by_hours, const SchedulePlan& plan,
                             const VehicleState& v,
                             double remaining_expected_hours);

/// Fresh arrival estimate from current progress.
SimTime update_expected_arrival(SimTime now, double remaining_km,
                                double effective_speed_kmh,
                                double remaining_break_hours);

}  // namespace lrsim
