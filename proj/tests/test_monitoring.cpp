#include <doctest.h>

#include <vector>

#include "lrsim/error.hpp"
#include "lrsim/monitoring.hpp"
#include "lrsim/random.hpp"

using namespace lrsim;

TEST_CASE("delta_t is the forward interval") {
  std::vector<CheckpointRecord> log = {{0, 10.0}, {1, 16.5}, {2, 24.0}};
  CHECK(delta_t(log, 0, 1) == doctest::Approx(6.5));
  CHECK(delta_t(log, 0, 2) == doctest::Approx(14.0));
  CHECK(delta_t(log, 1, 2) == doctest::Approx(7.5));

  try {
    delta_t(log, 2, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedInterval);
  }
  CHECK_THROWS_AS(delta_t(log, 1, 1), Error);
  try {
    delta_t(log, 0, 7);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingCheckpoint);
  }
}

TEST_CASE("total_time telescopes to the endpoints") {
  std::vector<CheckpointRecord> log = {{0, 3.0}, {1, 9.0}, {2, 10.5}, {3, 59.21}};
  CHECK(total_time(log) == 59.21 - 3.0);

  RandomSource rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CheckpointRecord> records;
    double t = rng.uniform(0.0, 10.0);
    const int n = 2 + static_cast<int>(rng.uniform01() * 15);
    for (int i = 0; i < n; ++i) {
      records.push_back({i, t});
      t += rng.uniform(0.0, 9.0);
    }
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) sum += delta_t(records, i, i + 1);
    // The consecutive deltas collapse; equality here is exact, not approximate.
    CHECK(total_time(records) == records.back().observed_time - records.front().observed_time);
    CHECK(sum == doctest::Approx(total_time(records)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(total_time({}), Error);
  CHECK_THROWS_AS(total_time({{0, 5.0}, {1, 4.0}}), Error);
}

TEST_CASE("time_to_reach_checkpoint") {
  CHECK(time_to_reach_checkpoint(2442.0, 50.0) == doctest::Approx(48.84));
  CHECK(time_to_reach_checkpoint(0.0, 50.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(time_to_reach_checkpoint(100.0, 0.0), Error);
  CHECK_THROWS_AS(time_to_reach_checkpoint(-1.0, 50.0), Error);
}

TEST_CASE("schedule_status band is inclusive") {
  CHECK(schedule_status(10.5, 10.0, 0.05) == ScheduleStatus::OnTime);   // exactly +5%
  CHECK(schedule_status(9.5, 10.0, 0.05) == ScheduleStatus::OnTime);    // exactly -5%
  CHECK(schedule_status(10.6, 10.0, 0.05) == ScheduleStatus::Behind);
  CHECK(schedule_status(9.4, 10.0, 0.05) == ScheduleStatus::Ahead);
  CHECK(schedule_status(10.0, 10.0, 0.0) == ScheduleStatus::OnTime);
  CHECK(schedule_status(0.0, 0.0, 0.05) == ScheduleStatus::OnTime);
  CHECK(schedule_status(0.1, 0.0, 0.05) == ScheduleStatus::Behind);
  CHECK_THROWS_AS(schedule_status(1.0, -1.0, 0.05), Error);
}

TEST_CASE("recovery_plan trims rests and boosts speed only when behind") {
  VehicleState v;
  v.base_speed_kmh = 50.0;
  v.max_speed_kmh = 80.0;
  SchedulePlan plan;
  plan.rest_reduction_factor = 0.5;

  const RecoveryAction none = recovery_plan(0.0, plan, v, 20.0);
  CHECK(none.rest_scale == doctest::Approx(1.0));
  CHECK(none.speed_kmh == doctest::Approx(50.0));

  // 2 h behind with 20 h to go: spread the deficit, 10% faster.
  const RecoveryAction some = recovery_plan(2.0, plan, v, 20.0);
  CHECK(some.rest_scale == doctest::Approx(0.5));
  CHECK(some.speed_kmh == doctest::Approx(55.0));

  // Far behind: the vehicle maximum caps the boost.
  const RecoveryAction capped = recovery_plan(100.0, plan, v, 20.0);
  CHECK(capped.speed_kmh == doctest::Approx(80.0));

  // A plan cap below the vehicle maximum wins.
  plan.speed_boost_cap_kmh = 60.0;
  CHECK(recovery_plan(100.0, plan, v, 20.0).speed_kmh == doctest::Approx(60.0));

  // Nothing left of the plan: keep the base speed, still trim rests.
  plan.speed_boost_cap_kmh = 0.0;
  const RecoveryAction tail = recovery_plan(2.0, plan, v, 0.0);
  CHECK(tail.speed_kmh == doctest::Approx(50.0));
  CHECK(tail.rest_scale == doctest::Approx(0.5));
}

TEST_CASE("update_expected_arrival") {
  CHECK(update_expected_arrival(10.0, 100.0, 50.0, 1.5) == doctest::Approx(13.5));
  CHECK(update_expected_arrival(10.0, 0.0, 50.0, 0.0) == doctest::Approx(10.0));
  CHECK(update_expected_arrival(10.0, -5.0, 50.0, -1.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(update_expected_arrival(10.0, 100.0, 0.0, 0.0), Error);
}
