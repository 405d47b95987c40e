#include "d2dcoex/interference.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "d2dcoex/errors.hpp"

namespace d2dcoex {
namespace {

int rb_of_pair(const SinrInputs& in, int pair) {
  if (!in.map.rb_of_d2d) throw Error("D2D pairs have no RB assignment");
  return (*in.map.rb_of_d2d)[static_cast<std::size_t>(pair)];
}

}  // namespace

void SpectrumMap::validate() const {
  if (static_cast<int>(rb_of_cu.size()) != num_rbs)
    throw ValidationError("rb_of_cu must have one entry per RB");
  std::vector<char> used(static_cast<std::size_t>(num_rbs), 0);
  for (int rb : rb_of_cu) {
    if (rb < 0 || rb >= num_rbs || used[static_cast<std::size_t>(rb)])
      throw ValidationError("rb_of_cu is not a bijection over RBs");
    used[static_cast<std::size_t>(rb)] = 1;
  }
  if (rb_of_d2d) {
    std::fill(used.begin(), used.end(), 0);
    for (int rb : *rb_of_d2d) {
      if (rb < 0 || rb >= num_rbs || used[static_cast<std::size_t>(rb)])
        throw ValidationError("rb_of_d2d must be injective into the RBs");
      used[static_cast<std::size_t>(rb)] = 1;
    }
  }
}

SpectrumMap SpectrumMap::random(int num_rbs, int subcarriers_per_rb, Rng& rng) {
  SpectrumMap map;
  map.num_rbs = num_rbs;
  map.subcarriers_per_rb = subcarriers_per_rb;
  map.rb_of_cu.resize(static_cast<std::size_t>(num_rbs));
  std::iota(map.rb_of_cu.begin(), map.rb_of_cu.end(), 0);
  for (int i = num_rbs - 1; i > 0; --i) {
    const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(map.rb_of_cu[static_cast<std::size_t>(i)], map.rb_of_cu[static_cast<std::size_t>(k)]);
  }
  return map;
}

SinrInputs make_sinr_inputs(const ChannelGains& gains, const SpectrumMap& map, const TableSet& tables,
                            Waveform d2d_waveform, double noise_per_subcarrier) {
  return {gains,
          map,
          tables.get(d2d_waveform, Waveform::Ofdm),
          tables.get(Waveform::Ofdm, d2d_waveform),
          tables.get(d2d_waveform, d2d_waveform),
          noise_per_subcarrier};
}

double rb_coupling(const InterferenceTable& table, int s, int rb_delta) {
  // Only separations with |k - m| <= L contribute.
  if (std::abs(rb_delta) * s - (s - 1) > table.half_span()) return 0.0;
  double sum = 0.0;
  for (int m = 0; m < s; ++m)
    for (int k = 0; k < s; ++k) sum += table(rb_delta * s + k - m);
  return sum;
}

double omega_d2d_to_cu(const SinrInputs& in, const PowerAllocation& p, int pair, int cu) {
  const int s = in.subcarriers_per_rb();
  const int tx0 = in.map.first_subcarrier(rb_of_pair(in, pair));
  const int rx0 = in.map.first_subcarrier(in.map.rb_of_cu[static_cast<std::size_t>(cu)]);
  const double p0 = in.d2d_to_cu.reference_power();
  double omega = 0.0;
  for (int m = 0; m < s; ++m) {
    const double pm = p.p_d2d(pair, m);
    if (pm == 0.0) continue;
    double leak = 0.0;
    for (int k = 0; k < s; ++k) leak += in.d2d_to_cu((rx0 + k) - (tx0 + m));
    omega += pm / p0 * leak;
  }
  return omega;
}

double cu_sinr(const SinrInputs& in, const PowerAllocation& p, int cu) {
  double interference = 0.0;
  if (in.map.rb_of_d2d) {
    const auto m = static_cast<int>(in.map.rb_of_d2d->size());
    for (int j = 0; j < m; ++j) interference += in.gains.h_d2d_bs(j) * omega_d2d_to_cu(in, p, j, cu);
  }
  return p.p_cu(cu) * in.gains.h_cu_bs(cu) / (in.noise_per_rb() + interference);
}

double i_cu_at_d2d(const SinrInputs& in, const PowerAllocation& p, int pair, int m) {
  const int s = in.subcarriers_per_rb();
  const int victim = in.map.first_subcarrier(rb_of_pair(in, pair)) + m;
  const double p0 = in.cu_to_d2d.reference_power();
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(in.map.rb_of_cu.size()); ++i) {
    const int tx0 = in.map.first_subcarrier(in.map.rb_of_cu[static_cast<std::size_t>(i)]);
    if (std::abs(victim - tx0) > in.cu_to_d2d.half_span() + s) continue;
    double leak = 0.0;
    for (int k = 0; k < s; ++k) leak += in.cu_to_d2d(victim - (tx0 + k));
    total += in.gains.h_cu_d2d(i, pair) * (p.p_cu(i) / s / p0) * leak;
  }
  return total;
}

double i_d2d_at(const SinrInputs& in, const PowerAllocation& p, int pair, int m) {
  const int s = in.subcarriers_per_rb();
  const int victim = in.map.first_subcarrier(rb_of_pair(in, pair)) + m;
  const double p0 = in.d2d_to_d2d.reference_power();
  const auto num_pairs = static_cast<int>(in.map.rb_of_d2d->size());
  double total = 0.0;
  for (int d = 0; d < num_pairs; ++d) {
    if (d == pair) continue;
    const int tx0 = in.map.first_subcarrier(rb_of_pair(in, d));
    if (std::abs(victim - tx0) > in.d2d_to_d2d.half_span() + s) continue;
    double leak = 0.0;
    for (int n = 0; n < s; ++n) leak += p.p_d2d(d, n) / p0 * in.d2d_to_d2d(victim - (tx0 + n));
    total += in.gains.h_d2d_d2d(d, pair) * leak;
  }
  return total;
}

double d2d_sinr_actual(const SinrInputs& in, const PowerAllocation& p, int pair, int m) {
  return p.p_d2d(pair, m) * in.gains.h_self(pair) /
         (in.noise_per_subcarrier + i_cu_at_d2d(in, p, pair, m) + i_d2d_at(in, p, pair, m));
}

double d2d_sinr_predicted(const SinrInputs& in, const PowerAllocation& p, int pair, int m) {
  return p.p_d2d(pair, m) * in.gains.h_self(pair) / (in.noise_per_subcarrier + i_cu_at_d2d(in, p, pair, m));
}

Eigen::MatrixXd cu_to_d2d_cost_matrix(const SinrInputs& in, const Eigen::VectorXd& p_cu) {
  const int s = in.subcarriers_per_rb();
  const int r_count = in.map.num_rbs;
  const int num_pairs = in.gains.num_pairs();
  const double p0 = in.cu_to_d2d.reference_power();

  std::vector<double> coupling(static_cast<std::size_t>(2 * r_count - 1));
  for (int delta = -(r_count - 1); delta <= r_count - 1; ++delta)
    coupling[static_cast<std::size_t>(delta + r_count - 1)] = rb_coupling(in.cu_to_d2d, s, delta);

  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(num_pairs, r_count);
  for (int i = 0; i < static_cast<int>(in.map.rb_of_cu.size()); ++i) {
    const int rb_i = in.map.rb_of_cu[static_cast<std::size_t>(i)];
    const double per_sc = p_cu(i) / s / p0;
    if (per_sc == 0.0) continue;
    for (int r = 0; r < r_count; ++r) {
      const double c = coupling[static_cast<std::size_t>(r - rb_i + r_count - 1)];
      if (c == 0.0) continue;
      for (int j = 0; j < num_pairs; ++j) phi(j, r) += per_sc * in.gains.h_cu_d2d(i, j) * c;
    }
  }
  return phi;
}

}  // namespace d2dcoex
