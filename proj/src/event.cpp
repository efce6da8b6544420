#include "lrsim/event.hpp"

#include <array>

namespace lrsim {

namespace {

constexpr std::array<const char*, 18> kKindNames = {
    "Depart",        "CheckpointPassed", "MealBreak",   "RefreshmentBreak",
    "RefuelStart",   "RefuelEnd",        "RestStart",   "RestEnd",
    "Breakdown",     "HelpRequested",    "VanAssigned", "VanArrived",
    "ServiceCompleted", "Heartbeat",     "SignalLost",  "AlarmRaised",
    "WeatherUpdate", "Arrived",
};

}  // namespace

const char* to_string(EventKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> event_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (name == kKindNames[i]) {
      return static_cast<EventKind>(i);
    }
  }
  return std::nullopt;
}

EventPayload& EventPayload::set(std::string key, PayloadValue value) {
  for (Field& f : fields_) {
    if (f.first == key) {
      f.second = std::move(value);
      return *this;
    }
  }
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

const PayloadValue* EventPayload::find(std::string_view key) const {
  for (const Field& f : fields_) {
    if (f.first == key) {
      return &f.second;
    }
  }
  return nullptr;
}

double EventPayload::num(std::string_view key) const {
  const PayloadValue* v = find(key);
  if (v == nullptr) {
    throw Error(ErrorCode::Invalid, "payload field missing: " + std::string(key));
  }
  if (const auto* d = std::get_if<double>(v)) {
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(v)) {
    return static_cast<double>(*i);
  }
  throw Error(ErrorCode::Invalid, "payload field not numeric: " + std::string(key));
}

std::int64_t EventPayload::integer(std::string_view key) const {
  const PayloadValue* v = find(key);
  if (v == nullptr || !std::holds_alternative<std::int64_t>(*v)) {
    throw Error(ErrorCode::Invalid, "payload field not an integer: " + std::string(key));
  }
  return std::get<std::int64_t>(*v);
}

const std::string& EventPayload::str(std::string_view key) const {
  const PayloadValue* v = find(key);
  if (v == nullptr || !std::holds_alternative<std::string>(*v)) {
    throw Error(ErrorCode::Invalid, "payload field not a string: " + std::string(key));
  }
  return std::get<std::string>(*v);
}

}  // namespace lrsim
