#include "lrsim/monitoring.hpp"

#include <algorithm>
#include <string>

#include "lrsim/error.hpp"

namespace lrsim {

namespace {

SimTime find_time(const std::vector<CheckpointRecord>& records, int id) {
  for (const CheckpointRecord& r : records)
    if (r.checkpoint_id == id) return r.observed_time;
  throw Error(ErrorCode::MissingCheckpoint,
              "checkpoint " + std::to_string(id) + " not in log");
}

}  // namespace

double delta_t(const std::vector<CheckpointRecord>& records, int i, int j) {
  if (i >= j)
    throw Error(ErrorCode::UndefinedInterval,
                "interval requires i < j, got i=" + std::to_string(i) +
                    " j=" + std::to_string(j));
  return find_time(records, j) - find_time(records, i);
}

double total_time(const std::vector<CheckpointRecord>& records) {
  if (records.empty())
    throw Error(ErrorCode::EmptyInput, "no checkpoint records");
  for (std::size_t k = 1; k < records.size(); ++k)
    if (records[k].observed_time < records[k - 1].observed_time)
      throw Error(ErrorCode::Invalid, "checkpoint log not time-ordered");
  // Sum of consecutive deltas collapses to the endpoints.
  return records.back().observed_time - records.front().observed_time;
}

double time_to_reach_checkpoint(double distance_km, double speed_kmh) {
  if (speed_kmh <= 0.0)
    throw Error(ErrorCode::Invalid, "speed must be positive");
  if (distance_km < 0.0)
    throw Error(ErrorCode::Invalid, "distance must be non-negative");
  return distance_km / speed_kmh;
}

const char* to_string(ScheduleStatus s) {
  switch (s) {
    case ScheduleStatus::Ahead: return "ahead";
    case ScheduleStatus::OnTime: return "on_time";
    case ScheduleStatus::Behind: return "behind";
  }
  return "?";
}

ScheduleStatus schedule_status(double actual_hours, double expected_hours,
                               double tolerance) {
  if (expected_hours < 0.0)
    throw Error(ErrorCode::Invalid, "expected hours must be non-negative");
  if (actual_hours > expected_hours * (1.0 + tolerance)) return ScheduleStatus::Behind;
  if (actual_hours < expected_hours * (1.0 - tolerance)) return ScheduleStatus::Ahead;
  return ScheduleStatus::OnTime;
}

RecoveryAction recovery_plan(double behind_by_hours, const SchedulePlan& plan,
                             const VehicleState& v,
                             double remaining_expected_hours) {
  RecoveryAction act;
  act.speed_kmh = v.base_speed_kmh;
  if (behind_by_hours <= 0.0) return act;

  act.rest_scale = plan.rest_reduction_factor;
  double boosted = v.base_speed_kmh;
  if (remaining_expected_hours > 0.0)
    boosted = v.base_speed_kmh * (1.0 + behind_by_hours / remaining_expected_hours);
  if (plan.speed_boost_cap_kmh > 0.0) boosted = std::min(boosted, plan.speed_boost_cap_kmh);
  if (v.max_speed_kmh > 0.0) boosted = std::min(boosted, v.max_speed_kmh);
  act.speed_kmh = std::max(boosted, v.base_speed_kmh);
  return act;
}

SimTime update_expected_arrival(SimTime now, double remaining_km,
                                double effective_speed_kmh,
                                double remaining_break_hours) {
  if (effective_speed_kmh <= 0.0)
    throw Error(ErrorCode::Invalid, "speed must be positive");
  if (remaining_km < 0.0) remaining_km = 0.0;
  if (remaining_break_hours < 0.0) remaining_break_hours = 0.0;
  return now + remaining_km / effective_speed_kmh + remaining_break_hours;
}

}  // namespace lrsim
