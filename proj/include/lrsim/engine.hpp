#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lrsim/event.hpp"
#include "lrsim/random.hpp"

namespace lrsim {

/// Deterministic discrete-event core: simulated clock, (time, seq)-ordered
/// event queue, one seeded random source, and the trace of processed events.
///
/// An engine instance is single-threaded by contract; instances are
/// self-contained and may run in parallel with no shared state.
class SimEngine {
 public:
  /// Handlers may mutate the event (e.g. annotate the payload) before it is
  /// appended to the trace, and may schedule further events.
  using Handler = std::function<void(SimEvent&)>;

  explicit SimEngine(std::uint64_t seed) : rng_(seed) {}

  SimTime now() const { return clock_; }
  RandomSource& rng() { return rng_; }

  /// Enqueue an event. Throws Error(Causality) if it lies in the past.
  /// The engine stamps the tie-break sequence number; events scheduled at
  /// the same timestamp are dispatched in scheduling order.
  std::uint64_t schedule(SimEvent ev);
  std::uint64_t schedule(SimTime t, EventKind kind, AgentId subject,
                         EventPayload payload = {});

  /// Process every queued event with time <= t_end, in (time, seq) order.
  /// Returns the cumulative trace. Afterward the clock sits at t_end when
  /// events remain beyond it, at the last processed time when the queue
  /// drained, and is unchanged when there was nothing to do.
  const Trace& run_until(SimTime t_end, const Handler& handler);

  const Trace& trace() const { return trace_; }
  std::size_t pending() const { return queue_.size(); }

 private:
  static bool later(const SimEvent& a, const SimEvent& b) {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }

  std::vector<SimEvent> queue_;  // min-heap on (time, seq)
  Trace trace_;
  SimTime clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  RandomSource rng_;
};

}  // namespace lrsim
