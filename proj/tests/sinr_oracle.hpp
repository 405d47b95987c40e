#pragma once

// Brute-force evaluation of the interference and SINR expressions on small
// instances. Every term is a plain sum over the whole band with explicit
// ownership tests, independent of the RB arithmetic in the library.

#include <cmath>
#include <cstdlib>
#include <vector>

#include "d2dcoex/channel.hpp"
#include "d2dcoex/interference.hpp"
#include "d2dcoex/rng.hpp"
#include "d2dcoex/waveform.hpp"

namespace oracle {

using namespace d2dcoex;

struct Toy {
  ChannelGains gains;
  SpectrumMap map;
  TableSet tables;
  PowerAllocation power;
  double noise = 0.0;
};

inline double lookup(const std::vector<double>& coeffs, int l) {
  const int half = static_cast<int>(coeffs.size() / 2);
  const int a = std::abs(l);
  return a > half ? 0.0 : coeffs[static_cast<std::size_t>(half + a)];
}

inline InterferenceTable random_table(Rng& rng, WaveformKind a, WaveformKind b, int half_span) {
  std::vector<double> c(static_cast<std::size_t>(2 * half_span + 1));
  for (int l = 0; l <= half_span; ++l) {
    const double v = rng.uniform(0.1, 1.0) * std::pow(0.5, l);
    c[static_cast<std::size_t>(half_span + l)] = v;
    c[static_cast<std::size_t>(half_span - l)] = v;
  }
  return {a, b, TableMethod::Psd, rng.uniform(0.5, 2.0), c};
}

inline Toy make_toy(Rng& rng, int num_rbs, int num_pairs, int half_span = 14) {
  Toy t;
  const int s = 12;
  const int num_cus = num_rbs;
  t.gains.h_cu_bs = Eigen::VectorXd::NullaryExpr(num_cus, [&] { return rng.uniform(1e-9, 1e-6); });
  t.gains.h_d2d_bs = Eigen::VectorXd::NullaryExpr(num_pairs, [&] { return rng.uniform(1e-9, 1e-6); });
  t.gains.h_cu_d2d = Eigen::MatrixXd::NullaryExpr(num_cus, num_pairs, [&] { return rng.uniform(1e-10, 1e-7); });
  t.gains.h_d2d_d2d = Eigen::MatrixXd::NullaryExpr(num_pairs, num_pairs, [&] { return rng.uniform(1e-10, 1e-7); });
  for (int j = 0; j < num_pairs; ++j) t.gains.h_d2d_d2d(j, j) = rng.uniform(1e-7, 1e-5);
  t.gains.h_self = t.gains.h_d2d_d2d.diagonal();

  t.map = SpectrumMap::random(num_rbs, s, rng);
  std::vector<int> rbs(static_cast<std::size_t>(num_rbs));
  for (int r = 0; r < num_rbs; ++r) rbs[static_cast<std::size_t>(r)] = r;
  for (int i = num_rbs - 1; i > 0; --i)
    std::swap(rbs[static_cast<std::size_t>(i)], rbs[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
  rbs.resize(static_cast<std::size_t>(num_pairs));
  t.map.rb_of_d2d = rbs;

  const auto o = WaveformKind::ofdm();
  const auto f = WaveformKind::fbmc();
  t.tables.ofdm_ofdm = random_table(rng, o, o, half_span);
  t.tables.ofdm_fbmc = random_table(rng, o, f, half_span);
  t.tables.fbmc_ofdm = random_table(rng, f, o, half_span);
  t.tables.fbmc_fbmc = random_table(rng, f, f, half_span);

  t.power.p_cu = Eigen::VectorXd::NullaryExpr(num_cus, [&] { return rng.uniform(0.05, 0.25); });
  t.power.p_d2d = Eigen::MatrixXd::NullaryExpr(num_pairs, s, [&] { return rng.uniform(0.0, 0.02); });
  t.noise = rng.uniform(1e-16, 1e-15);
  return t;
}

// Owner of global subcarrier k among the given RB list, or -1.
inline int owner(const std::vector<int>& rb_of, int k, int s) {
  for (std::size_t n = 0; n < rb_of.size(); ++n)
    if (k >= rb_of[n] * s && k < rb_of[n] * s + s) return static_cast<int>(n);
  return -1;
}

struct Oracle {
  const Toy& t;
  const InterferenceTable& d2d_to_cu;
  const InterferenceTable& cu_to_d2d;
  const InterferenceTable& d2d_to_d2d;

  Oracle(const Toy& toy, Waveform wf)
      : t(toy),
        d2d_to_cu(toy.tables.get(wf, Waveform::Ofdm)),
        cu_to_d2d(toy.tables.get(Waveform::Ofdm, wf)),
        d2d_to_d2d(toy.tables.get(wf, wf)) {}

  int s() const { return t.map.subcarriers_per_rb; }
  int band() const { return t.map.num_rbs * s(); }
  const std::vector<int>& d2d_rbs() const { return *t.map.rb_of_d2d; }

  double d2d_power_at(int k, int pair) const {
    return owner(d2d_rbs(), k, s()) == pair ? t.power.p_d2d(pair, k % s()) : 0.0;
  }

  double omega(int pair, int cu) const {
    double sum = 0.0;
    for (int m = 0; m < band(); ++m)
      for (int k = 0; k < band(); ++k)
        if (owner(t.map.rb_of_cu, k, s()) == cu)
          sum += d2d_power_at(m, pair) / d2d_to_cu.reference_power() * lookup(d2d_to_cu.coeffs(), k - m);
    return sum;
  }

  double cu_sinr(int cu) const {
    double interference = 0.0;
    for (int j = 0; j < static_cast<int>(d2d_rbs().size()); ++j)
      interference += t.gains.h_d2d_bs(j) * omega(j, cu);
    return t.power.p_cu(cu) * t.gains.h_cu_bs(cu) / (s() * t.noise + interference);
  }

  double i_cu(int pair, int m) const {
    const int v = d2d_rbs()[static_cast<std::size_t>(pair)] * s() + m;
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(t.map.rb_of_cu.size()); ++i)
      for (int k = 0; k < band(); ++k)
        if (owner(t.map.rb_of_cu, k, s()) == i)
          sum += t.gains.h_cu_d2d(i, pair) * t.power.p_cu(i) / s() / cu_to_d2d.reference_power() *
                 lookup(cu_to_d2d.coeffs(), k - v);
    return sum;
  }

  double i_d2d(int pair, int m) const {
    const int v = d2d_rbs()[static_cast<std::size_t>(pair)] * s() + m;
    double sum = 0.0;
    for (int d = 0; d < static_cast<int>(d2d_rbs().size()); ++d) {
      if (d == pair) continue;
      for (int n = 0; n < band(); ++n)
        sum += t.gains.h_d2d_d2d(d, pair) * d2d_power_at(n, d) / d2d_to_d2d.reference_power() *
               lookup(d2d_to_d2d.coeffs(), n - v);
    }
    return sum;
  }

  double sinr_actual(int pair, int m) const {
    return t.power.p_d2d(pair, m) * t.gains.h_self(pair) / (t.noise + i_cu(pair, m) + i_d2d(pair, m));
  }

  double sinr_predicted(int pair, int m) const {
    return t.power.p_d2d(pair, m) * t.gains.h_self(pair) / (t.noise + i_cu(pair, m));
  }

  double cost(int pair, int rb) const {
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(t.map.rb_of_cu.size()); ++i)
      for (int m = 0; m < band(); ++m) {
        if (owner(t.map.rb_of_cu, m, s()) != i) continue;
        for (int k = rb * s(); k < rb * s() + s(); ++k)
          sum += t.power.p_cu(i) / s() / cu_to_d2d.reference_power() * t.gains.h_cu_d2d(i, pair) *
                 lookup(cu_to_d2d.coeffs(), k - m);
      }
    return sum;
  }
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Largest relative deviation between library and oracle over every expression.
inline double max_sinr_deviation(const Toy& t, Waveform wf) {
  const Oracle o(t, wf);
  const SinrInputs in = make_sinr_inputs(t.gains, t.map, t.tables, wf, t.noise);
  const int pairs = t.gains.num_pairs();
  double worst = 0.0;
  for (int i = 0; i < t.gains.num_cus(); ++i) {
    worst = std::max(worst, rel_diff(cu_sinr(in, t.power, i), o.cu_sinr(i)));
    for (int j = 0; j < pairs; ++j) worst = std::max(worst, rel_diff(omega_d2d_to_cu(in, t.power, j, i), o.omega(j, i)));
  }
  for (int j = 0; j < pairs; ++j)
    for (int m = 0; m < o.s(); ++m) {
      worst = std::max(worst, rel_diff(i_cu_at_d2d(in, t.power, j, m), o.i_cu(j, m)));
      worst = std::max(worst, rel_diff(i_d2d_at(in, t.power, j, m), o.i_d2d(j, m)));
      worst = std::max(worst, rel_diff(d2d_sinr_actual(in, t.power, j, m), o.sinr_actual(j, m)));
      worst = std::max(worst, rel_diff(d2d_sinr_predicted(in, t.power, j, m), o.sinr_predicted(j, m)));
    }
  const Eigen::MatrixXd phi = cu_to_d2d_cost_matrix(in, t.power.p_cu);
  for (int j = 0; j < pairs; ++j)
    for (int r = 0; r < t.map.num_rbs; ++r) worst = std::max(worst, rel_diff(phi(j, r), o.cost(j, r)));
  return worst;
}

}  // namespace oracle
