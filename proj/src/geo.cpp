#include "lrsim/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lrsim {

namespace {

constexpr double kEarthRadiusKm = 6371.0;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

void check_geographic(const Position& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -180.0 ||
      p.x > 180.0 || p.y < -90.0 || p.y > 90.0) {
    throw Error(ErrorCode::Invalid, "geographic position out of range");
  }
}

double haversine_km(const Position& a, const Position& b) {
  const double lat1 = deg2rad(a.y);
  const double lat2 = deg2rad(b.y);
  const double dlat = deg2rad(b.y - a.y);
  const double dlon = deg2rad(b.x - a.x);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace

Route::Route(std::vector<Checkpoint> checkpoints, std::vector<double> segment_speeds)
    : checkpoints_(std::move(checkpoints)), segment_speeds_(std::move(segment_speeds)) {
  if (checkpoints_.size() < 2) {
    throw Error(ErrorCode::Invalid, "route needs at least two checkpoints");
  }
  if (segment_speeds_.size() != checkpoints_.size() - 1) {
    throw Error(ErrorCode::Invalid, "route needs one segment speed per checkpoint pair");
  }
  if (checkpoints_.front().cumulative_km != 0.0) {
    throw Error(ErrorCode::Invalid, "checkpoint 0 must sit at km 0");
  }
  const CoordMode mode = checkpoints_.front().position.mode;
  for (std::size_t i = 0; i < checkpoints_.size(); ++i) {
    if (checkpoints_[i].id != static_cast<int>(i)) {
      throw Error(ErrorCode::Invalid, "checkpoint ids must be consecutive from 0");
    }
    if (checkpoints_[i].position.mode != mode) {
      throw Error(ErrorCode::ModeMismatch, "route mixes grid and geographic checkpoints");
    }
    if (i > 0 && !(checkpoints_[i].cumulative_km > checkpoints_[i - 1].cumulative_km)) {
      throw Error(ErrorCode::Invalid, "cumulative_km must be strictly increasing");
    }
  }
  for (double s : segment_speeds_) {
    if (!(s > 0.0)) {
      throw Error(ErrorCode::Invalid, "segment speeds must be positive");
    }
  }
}

std::size_t Route::segment_at(double km) const {
  if (km < 0.0 || km > length_km()) {
    throw Error(ErrorCode::OutOfRange, "route-km outside [0, length]");
  }
  // First checkpoint with cumulative_km > km bounds the segment on the right.
  auto it = std::upper_bound(checkpoints_.begin(), checkpoints_.end(), km,
                             [](double v, const Checkpoint& c) { return v < c.cumulative_km; });
  if (it == checkpoints_.end()) {
    return checkpoints_.size() - 2;  // km == length
  }
  std::size_t idx = static_cast<std::size_t>(it - checkpoints_.begin());
  return idx == 0 ? 0 : idx - 1;
}

std::optional<int> Route::next_checkpoint_after(double km) const {
  for (const Checkpoint& c : checkpoints_) {
    if (c.cumulative_km > km + 1e-9) {
      return c.id;
    }
  }
  return std::nullopt;
}

double distance(const Position& a, const Position& b) {
  if (a.mode != b.mode) {
    throw Error(ErrorCode::ModeMismatch, "cannot measure distance across coordinate modes");
  }
  if (a.mode == CoordMode::Grid) {
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || !std::isfinite(b.x) ||
        !std::isfinite(b.y)) {
      throw Error(ErrorCode::Invalid, "grid position must be finite");
    }
    return std::hypot(b.x - a.x, b.y - a.y);
  }
  check_geographic(a);
  check_geographic(b);
  return haversine_km(a, b);
}

Position position_at_km(const Route& route, double s) {
  if (s < 0.0 || s > route.length_km()) {
    throw Error(ErrorCode::OutOfRange, "route-km outside [0, length]");
  }
  const auto& cps = route.checkpoints();
  const std::size_t i = route.segment_at(s);
  const Checkpoint& a = cps[i];
  const Checkpoint& b = cps[i + 1];
  const double span = b.cumulative_km - a.cumulative_km;
  const double t = (s - a.cumulative_km) / span;
  Position p;
  p.mode = a.position.mode;
  p.x = a.position.x + t * (b.position.x - a.position.x);
  p.y = a.position.y + t * (b.position.y - a.position.y);
  return p;
}

double distance_to_checkpoint(const Route& route, double current_km, int j) {
  const auto& cps = route.checkpoints();
  if (j < 0 || static_cast<std::size_t>(j) >= cps.size()) {
    throw Error(ErrorCode::OutOfRange, "no such checkpoint");
  }
  const double target = cps[static_cast<std::size_t>(j)].cumulative_km;
  if (target < current_km) {
    throw Error(ErrorCode::CheckpointBehind, "checkpoint already passed; not a valid ETA target");
  }
  return target - current_km;
}

}  // namespace lrsim
