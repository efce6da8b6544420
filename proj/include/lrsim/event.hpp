#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lrsim/error.hpp"

namespace lrsim {

/// Simulated time in hours.
using SimTime = double;
using AgentId = std::string;

enum class EventKind {
  Depart,
  CheckpointPassed,
  MealBreak,
  RefreshmentBreak,
  RefuelStart,
  RefuelEnd,
  RestStart,
  RestEnd,
  Breakdown,
  HelpRequested,
  VanAssigned,
  VanArrived,
  ServiceCompleted,
  Heartbeat,
  SignalLost,
  AlarmRaised,
  WeatherUpdate,
  Arrived,
};

const char* to_string(EventKind kind);
std::optional<EventKind> event_kind_from_string(std::string_view name);

using PayloadValue = std::variant<std::int64_t, double, std::string>;

/// Flat, ordered key-value record attached to an event. Insertion order is
/// preserved so serialized traces are byte-stable.
class EventPayload {
 public:
  using Field = std::pair<std::string, PayloadValue>;

  EventPayload& set(std::string key, PayloadValue value);
  // Exact-match overloads: without them a double argument would prefer the
  // int overload's standard conversion over the variant's user-defined one
  // and be silently truncated.
  EventPayload& set(std::string key, double value) {
    return set(std::move(key), PayloadValue(value));
  }
  EventPayload& set(std::string key, std::int64_t value) {
    return set(std::move(key), PayloadValue(value));
  }
  EventPayload& set(std::string key, int value) {
    return set(std::move(key), PayloadValue(static_cast<std::int64_t>(value)));
  }
  EventPayload& set(std::string key, const char* value) {
    return set(std::move(key), PayloadValue(std::string(value)));
  }
  EventPayload& set(std::string key, std::string value) {
    return set(std::move(key), PayloadValue(std::move(value)));
  }

  const PayloadValue* find(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }

  /// Numeric accessor; accepts either an integer or a double field.
  double num(std::string_view key) const;
  std::int64_t integer(std::string_view key) const;
  const std::string& str(std::string_view key) const;

  bool empty() const { return fields_.empty(); }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

 private:
  std::vector<Field> fields_;
};

struct SimEvent {
  SimTime time = 0.0;
  std::uint64_t seq = 0;  // assigned by the engine; tie-break within a timestamp
  EventKind kind = EventKind::Depart;
  AgentId subject;
  EventPayload payload;
};

/// Ordered record of every processed event; the observation log of a run.
using Trace = std::vector<SimEvent>;

}  // namespace lrsim
