#pragma once

#include <optional>
#include <string>
#include <vector>

#include "d2dcoex/config.hpp"
#include "d2dcoex/rng.hpp"

namespace d2dcoex {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct NodePlacement {
  Point bs_pos;
  std::vector<Point> cu_pos;
  std::vector<Point> d2d_tx_pos;
  std::vector<Point> d2d_rx_pos;
  std::optional<Point> cluster_centre;
  std::optional<double> cluster_radius;
};

/// Largest transmitter-receiver separation of a D2D pair for this layout.
double max_link_distance(const ScenarioConfig& config, std::optional<double> cluster_radius);

/// CUs uniform over the cell. Clustered: one cluster disc placed fully inside
/// the cell (at config.cluster_distance_fixed from the BS when set), pair
/// transmitters uniform in it. Non-clustered: transmitters uniform over the
/// cell. Receivers sit at a uniform angle and uniform distance in
/// (0, max_link] from their transmitter, redrawn until inside the cell.
NodePlacement sample_placement(const ScenarioConfig& config, Rng& rng);

/// Clustered placement with the cluster centre at `cluster_distance` from the BS.
NodePlacement sample_placement_at_distance(const ScenarioConfig& config, Rng& rng, double cluster_distance);

/// `node_type,index,x,y` rows.
std::string placement_csv(const NodePlacement& placement);

}  // namespace d2dcoex
