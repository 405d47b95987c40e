#include "d2dcoex/channel.hpp"

#include <algorithm>
#include <cmath>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/io.hpp"

namespace d2dcoex {

double los_probability(double d) {
  if (!(d > 0.0)) throw DomainError("los_probability: distance must be positive");
  const double e = std::exp(-d / 36.0);
  return std::clamp(std::min(18.0 / d, 1.0) * (1.0 - e) + e, 0.0, 1.0);
}

double pathloss_db(double d, double carrier_freq, bool los) {
  const double fc_ghz = carrier_freq / 1e9;
  const double pl_los = 22.7 * std::log10(d) + 41.0 + 20.0 * std::log10(fc_ghz / 5.0);
  if (los) return std::max(0.0, pl_los);
  const double pl_nlos = (44.9 - 6.55 * std::log10(kBsHeight)) * std::log10(d) + 16.33 +
                         5.83 * std::log10(kBsHeight) + 23.0 * std::log10(fc_ghz / 5.0);
  return std::max({0.0, pl_los, pl_nlos});
}

namespace {

struct LinkDraw {
  double gain;
  bool los;
};

LinkDraw draw_link(const Point& a, const Point& b, double fc, Rng& rng) {
  const double d = std::max(distance(a, b), kMinLinkDistance);
  const bool los = rng.bernoulli(los_probability(d));
  return {std::pow(10.0, -pathloss_db(d, fc, los) / 10.0), los};
}

}  // namespace

ChannelGains gains_from_placement(const NodePlacement& p, const ScenarioConfig& config, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(p.cu_pos.size());
  const auto m = static_cast<Eigen::Index>(p.d2d_tx_pos.size());
  const double fc = config.carrier_freq;
  ChannelGains g;
  g.h_cu_bs.resize(n);
  g.los_cu_bs.resize(n);
  g.h_d2d_bs.resize(m);
  g.los_d2d_bs.resize(m);
  g.h_cu_d2d.resize(n, m);
  g.los_cu_d2d.resize(n, m);
  g.h_d2d_d2d.resize(m, m);
  g.los_d2d_d2d.resize(m, m);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [gain, los] = draw_link(p.cu_pos[static_cast<std::size_t>(i)], p.bs_pos, fc, rng);
    g.h_cu_bs(i) = gain;
    g.los_cu_bs(i) = los;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto [gain, los] = draw_link(p.d2d_tx_pos[static_cast<std::size_t>(j)], p.bs_pos, fc, rng);
    g.h_d2d_bs(j) = gain;
    g.los_d2d_bs(j) = los;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto [gain, los] =
          draw_link(p.cu_pos[static_cast<std::size_t>(i)], p.d2d_rx_pos[static_cast<std::size_t>(j)], fc, rng);
      g.h_cu_d2d(i, j) = gain;
      g.los_cu_d2d(i, j) = los;
    }
  for (Eigen::Index d = 0; d < m; ++d)
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto [gain, los] =
          draw_link(p.d2d_tx_pos[static_cast<std::size_t>(d)], p.d2d_rx_pos[static_cast<std::size_t>(j)], fc, rng);
      g.h_d2d_d2d(d, j) = gain;
      g.los_d2d_d2d(d, j) = los;
    }
  g.h_self = g.h_d2d_d2d.diagonal();
  return g;
}

std::string gains_csv(const ChannelGains& g) {
  std::string out = "link_type,i,j,gain_db,los\n";
  auto row = [&](const char* type, Eigen::Index i, Eigen::Index j, double gain, bool los) {
    out += std::string(type) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
           format_sig9(10.0 * std::log10(gain)) + "," + (los ? "1" : "0") + "\n";
  };
  for (Eigen::Index i = 0; i < g.h_cu_bs.size(); ++i) row("cu_bs", i, 0, g.h_cu_bs(i), g.los_cu_bs(i));
  for (Eigen::Index j = 0; j < g.h_d2d_bs.size(); ++j) row("d2d_bs", j, 0, g.h_d2d_bs(j), g.los_d2d_bs(j));
  for (Eigen::Index i = 0; i < g.h_cu_d2d.rows(); ++i)
    for (Eigen::Index j = 0; j < g.h_cu_d2d.cols(); ++j) row("cu_d2d", i, j, g.h_cu_d2d(i, j), g.los_cu_d2d(i, j));
  for (Eigen::Index d = 0; d < g.h_d2d_d2d.rows(); ++d)
    for (Eigen::Index j = 0; j < g.h_d2d_d2d.cols(); ++j)
      row(d == j ? "self" : "d2d_d2d", d, j, g.h_d2d_d2d(d, j), g.los_d2d_d2d(d, j));
  return out;
}

}  // namespace d2dcoex
