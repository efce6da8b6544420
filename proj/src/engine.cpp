#include "lrsim/engine.hpp"

#include <algorithm>
#include <utility>

namespace lrsim {

std::uint64_t SimEngine::schedule(SimEvent ev) {
  if (ev.time < clock_) {
    throw Error(ErrorCode::Causality, "cannot schedule an event in the past");
  }
  ev.seq = next_seq_++;
  const std::uint64_t handle = ev.seq;
  queue_.push_back(std::move(ev));
  std::push_heap(queue_.begin(), queue_.end(), later);
  return handle;
}

std::uint64_t SimEngine::schedule(SimTime t, EventKind kind, AgentId subject,
                                  EventPayload payload) {
  SimEvent ev;
  ev.time = t;
  ev.kind = kind;
  ev.subject = std::move(subject);
  ev.payload = std::move(payload);
  return schedule(std::move(ev));
}

const Trace& SimEngine::run_until(SimTime t_end, const Handler& handler) {
  if (t_end < clock_) {
    throw Error(ErrorCode::Causality, "run_until target precedes the clock");
  }
  bool processed_any = false;
  while (!queue_.empty() && queue_.front().time <= t_end) {
    std::pop_heap(queue_.begin(), queue_.end(), later);
    SimEvent ev = std::move(queue_.back());
    queue_.pop_back();
    clock_ = ev.time;
    processed_any = true;
    handler(ev);
    trace_.push_back(std::move(ev));
  }
  if (!queue_.empty()) {
    clock_ = t_end;  // time passed with the remaining events still ahead
  } else if (!processed_any) {
    // empty queue: return early, clock unchanged
  }
  return trace_;
}

}  // namespace lrsim
