#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lrsim/error.hpp"

namespace lrsim {

enum class CoordMode { Grid, Geographic };

/// A point either on an abstract square grid or on the globe
/// (x = longitude, y = latitude, degrees).
struct Position {
  double x = 0.0;
  double y = 0.0;
  CoordMode mode = CoordMode::Grid;
};

struct Checkpoint {
  int id = 0;
  Position position;
  double cumulative_km = 0.0;  // route distance from the origin checkpoint
};

/// An ordered checkpoint polyline with per-segment average speeds.
/// The vehicle's primary coordinate is distance along this curve;
/// 2-D positions exist for nearest-service queries.
class Route {
 public:
  Route(std::vector<Checkpoint> checkpoints, std::vector<double> segment_speeds);

  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  const std::vector<double>& segment_speeds() const { return segment_speeds_; }
  double length_km() const { return checkpoints_.back().cumulative_km; }
  CoordMode mode() const { return checkpoints_.front().position.mode; }

  /// Index i of the segment [cp_i, cp_i+1] containing the given route-km
  /// (the last segment for km == length).
  std::size_t segment_at(double km) const;

  /// First checkpoint strictly ahead of the given route-km, if any.
  std::optional<int> next_checkpoint_after(double km) const;

 private:
  std::vector<Checkpoint> checkpoints_;
  std::vector<double> segment_speeds_;
};

/// Distance in km: Euclidean on the grid, haversine (R = 6371 km) on the
/// globe. Throws Error(ModeMismatch) when the modes differ.
double distance(const Position& a, const Position& b);

/// Position at route-km s by linear interpolation between the bounding
/// checkpoints. s must lie in [0, length_km].
Position position_at_km(const Route& route, double s);

/// Remaining route distance from current_km to checkpoint j.
/// Throws Error(CheckpointBehind) if the checkpoint was already passed.
double distance_to_checkpoint(const Route& route, double current_km, int j);

}  // namespace lrsim
