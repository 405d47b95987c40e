#pragma once

// Interference and SINR expressions of the underlay system model.
//
// Subcarriers are indexed across the whole band: RB r occupies
// [r * S, r * S + S - 1] with S subcarriers per RB. Leakage between two
// subcarriers uses the interference table of the (interferer, victim)
// waveforms at their signed spectral distance. Table-weighted powers are
// expressed relative to the table's reference power P0.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "d2dcoex/channel.hpp"
#include "d2dcoex/rng.hpp"
#include "d2dcoex/waveform.hpp"

namespace d2dcoex {

struct SpectrumMap {
  int num_rbs = 0;
  int subcarriers_per_rb = 12;
  std::vector<int> rb_of_cu;                ///< bijection CU -> RB
  std::optional<std::vector<int>> rb_of_d2d;  ///< injective pair -> RB once assigned

  int first_subcarrier(int rb) const { return rb * subcarriers_per_rb; }
  /// Throws ValidationError if rb_of_cu is not a bijection or rb_of_d2d is not injective.
  void validate() const;

  /// Uniformly random CU -> RB bijection.
  static SpectrumMap random(int num_rbs, int subcarriers_per_rb, Rng& rng);
};

struct PowerAllocation {
  Eigen::MatrixXd p_d2d;  ///< pair x subcarrier-in-RB, W
  Eigen::VectorXd p_cu;   ///< per CU, W over its whole RB
};

/// Everything the SINR expressions read for one snapshot and one D2D waveform.
struct SinrInputs {
  const ChannelGains& gains;
  const SpectrumMap& map;
  const InterferenceTable& d2d_to_cu;   ///< I{D2D waveform -> OFDM}
  const InterferenceTable& cu_to_d2d;   ///< I{OFDM -> D2D waveform}
  const InterferenceTable& d2d_to_d2d;  ///< I{D2D waveform -> D2D waveform}
  double noise_per_subcarrier;          ///< W

  int subcarriers_per_rb() const { return map.subcarriers_per_rb; }
  double noise_per_rb() const { return noise_per_subcarrier * map.subcarriers_per_rb; }
};

SinrInputs make_sinr_inputs(const ChannelGains& gains, const SpectrumMap& map, const TableSet& tables,
                            Waveform d2d_waveform, double noise_per_subcarrier);

/// Leakage of pair j (all its subcarriers) onto the RB of CU i, before the
/// pair->BS gain: sum_m sum_{k in b_i} (P_jm / P0) I(k - m).
double omega_d2d_to_cu(const SinrInputs& in, const PowerAllocation& p, int pair, int cu);

/// CU SINR at the BS over its RB, noise aggregated over the RB.
double cu_sinr(const SinrInputs& in, const PowerAllocation& p, int cu);

/// Interference from all CUs on subcarrier m (0-based within the pair's RB)
/// at the receiver of pair j; each CU spreads its power evenly over its RB.
double i_cu_at_d2d(const SinrInputs& in, const PowerAllocation& p, int pair, int m);

/// Inter-D2D interference on subcarrier m of pair j.
double i_d2d_at(const SinrInputs& in, const PowerAllocation& p, int pair, int m);

double d2d_sinr_actual(const SinrInputs& in, const PowerAllocation& p, int pair, int m);

/// As d2d_sinr_actual without the inter-D2D term.
double d2d_sinr_predicted(const SinrInputs& in, const PowerAllocation& p, int pair, int m);

/// CU-to-D2D interference cost of placing pair j on RB r (pairs x RBs). Only
/// gains, CU powers and the CU->D2D table are used.
Eigen::MatrixXd cu_to_d2d_cost_matrix(const SinrInputs& in, const Eigen::VectorXd& p_cu);

/// sum_{m in b_a} sum_{k in b_b} I(k - m) for RBs separated by `rb_delta`
/// (b - a); depends only on the separation.
double rb_coupling(const InterferenceTable& table, int subcarriers_per_rb, int rb_delta);

}  // namespace d2dcoex
