#include "d2dcoex/geometry.hpp"

#include <cmath>
#include <numbers>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/io.hpp"

namespace d2dcoex {
namespace {

Point uniform_in_disc(const Point& centre, double radius, Rng& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

double cluster_radius_for(const ScenarioConfig& config, Rng& rng) {
  if (config.cluster_radius_fixed) return *config.cluster_radius_fixed;
  return rng.uniform(config.cluster_radius_min, config.cluster_radius_max);
}

void place_receivers(const ScenarioConfig& config, double max_link, Rng& rng, NodePlacement& p) {
  const Point bs = p.bs_pos;
  p.d2d_rx_pos.reserve(p.d2d_tx_pos.size());
  for (const Point& tx : p.d2d_tx_pos) {
    Point rx;
    do {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      const double d = max_link * rng.uniform_open_closed();
      rx = {tx.x + d * std::cos(theta), tx.y + d * std::sin(theta)};
    } while (distance(rx, bs) > config.cell_radius);
    p.d2d_rx_pos.push_back(rx);
  }
}

NodePlacement place(const ScenarioConfig& config, Rng& rng, std::optional<double> cluster_distance) {
  NodePlacement p;
  p.cu_pos.reserve(static_cast<std::size_t>(config.num_cus));
  for (int i = 0; i < config.num_cus; ++i) p.cu_pos.push_back(uniform_in_disc(p.bs_pos, config.cell_radius, rng));

  if (config.layout == Layout::NonClustered && !cluster_distance) {
    for (int j = 0; j < config.num_d2d_pairs; ++j)
      p.d2d_tx_pos.push_back(uniform_in_disc(p.bs_pos, config.cell_radius, rng));
    place_receivers(config, max_link_distance(config, std::nullopt), rng, p);
    return p;
  }

  const double radius = cluster_radius_for(config, rng);
  if (radius > config.cell_radius)
    throw ConfigError("cluster radius " + std::to_string(radius) + " m exceeds cell radius " +
                      std::to_string(config.cell_radius) + " m");
  Point centre;
  if (cluster_distance) {
    if (*cluster_distance < 0.0 || *cluster_distance + radius > config.cell_radius)
      throw ConfigError("cluster at distance " + std::to_string(*cluster_distance) + " m with radius " +
                        std::to_string(radius) + " m does not fit in a cell of radius " +
                        std::to_string(config.cell_radius) + " m");
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    centre = {*cluster_distance * std::cos(theta), *cluster_distance * std::sin(theta)};
  } else {
    // Uniform over the region where the whole cluster disc stays inside the
    // cell; same law as redrawing uniform centres until the cluster fits.
    centre = uniform_in_disc(p.bs_pos, config.cell_radius - radius, rng);
  }
  p.cluster_centre = centre;
  p.cluster_radius = radius;
  for (int j = 0; j < config.num_d2d_pairs; ++j) p.d2d_tx_pos.push_back(uniform_in_disc(centre, radius, rng));
  place_receivers(config, max_link_distance(config, radius), rng, p);
  return p;
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double max_link_distance(const ScenarioConfig& config, std::optional<double> cluster_radius) {
  if (config.layout == Layout::NonClustered && !cluster_radius)
    return config.d2d_max_link_factor * config.cluster_radius_max;
  return config.d2d_max_link_factor * cluster_radius.value_or(config.cluster_radius_max);
}

NodePlacement sample_placement(const ScenarioConfig& config, Rng& rng) {
  if (config.layout == Layout::Clustered && config.cluster_distance_fixed)
    return place(config, rng, config.cluster_distance_fixed);
  return place(config, rng, std::nullopt);
}

NodePlacement sample_placement_at_distance(const ScenarioConfig& config, Rng& rng, double cluster_distance) {
  ScenarioConfig clustered = config;
  clustered.layout = Layout::Clustered;
  return place(clustered, rng, cluster_distance);
}

std::string placement_csv(const NodePlacement& p) {
  std::string out = "node_type,index,x,y\n";
  auto row = [&](const char* type, std::size_t i, const Point& q) {
    out += std::string(type) + "," + std::to_string(i) + "," + format_sig9(q.x) + "," + format_sig9(q.y) + "\n";
  };
  row("bs", 0, p.bs_pos);
  if (p.cluster_centre) row("cluster_centre", 0, *p.cluster_centre);
  for (std::size_t i = 0; i < p.cu_pos.size(); ++i) row("cu", i, p.cu_pos[i]);
  for (std::size_t i = 0; i < p.d2d_tx_pos.size(); ++i) row("d2d_tx", i, p.d2d_tx_pos[i]);
  for (std::size_t i = 0; i < p.d2d_rx_pos.size(); ++i) row("d2d_rx", i, p.d2d_rx_pos[i]);
  return out;
}

}  // namespace d2dcoex
