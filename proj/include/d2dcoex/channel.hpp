#pragma once

#include <string>

#include <Eigen/Dense>

#include "d2dcoex/config.hpp"
#include "d2dcoex/geometry.hpp"
#include "d2dcoex/rng.hpp"

namespace d2dcoex {

// Urban micro-cell (WINNER II B1) pathloss with probabilistic line of sight.
// Antenna heights are fixed; no shadowing or fast fading.
inline constexpr double kBsHeight = 10.0;
inline constexpr double kUtHeight = 1.5;
inline constexpr double kMinLinkDistance = 3.0;

/// Throws DomainError for d <= 0.
double los_probability(double d);

/// Pathloss in dB for d >= kMinLinkDistance (callers clamp). NLOS never
/// drops below LOS at the same distance.
double pathloss_db(double d, double carrier_freq, bool los);

using BoolVector = Eigen::Matrix<bool, Eigen::Dynamic, 1>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Linear power gains for every link role. Matrix layouts:
///   h_cu_d2d(i, j)  : CU i  -> receiver of pair j
///   h_d2d_d2d(d, j) : transmitter of pair d -> receiver of pair j (diagonal = h_self)
struct ChannelGains {
  Eigen::VectorXd h_cu_bs;
  Eigen::VectorXd h_d2d_bs;
  Eigen::MatrixXd h_cu_d2d;
  Eigen::MatrixXd h_d2d_d2d;
  Eigen::VectorXd h_self;
  BoolVector los_cu_bs;
  BoolVector los_d2d_bs;
  BoolMatrix los_cu_d2d;
  BoolMatrix los_d2d_d2d;

  int num_cus() const { return static_cast<int>(h_cu_bs.size()); }
  int num_pairs() const { return static_cast<int>(h_d2d_bs.size()); }
};

/// Draws an independent LOS state per directed link and converts pathloss to
/// gain; distances below kMinLinkDistance are clamped.
ChannelGains gains_from_placement(const NodePlacement& placement, const ScenarioConfig& config, Rng& rng);

/// `link_type,i,j,gain_db,los` rows.
std::string gains_csv(const ChannelGains& gains);

}  // namespace d2dcoex
