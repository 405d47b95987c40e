#include <catch2/catch_amalgamated.hpp>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/interference.hpp"
#include "sinr_oracle.hpp"

using namespace d2dcoex;
using Catch::Approx;

TEST_CASE("every expression matches the brute-force sums", "[interference]") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int rbs = 1 + trial % 3;
    const int pairs = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(rbs)));
    const oracle::Toy t = oracle::make_toy(rng, rbs, pairs, trial % 2 ? 14 : 30);
    for (Waveform wf : {Waveform::Ofdm, Waveform::FbmcOqam})
      REQUIRE(oracle::max_sinr_deviation(t, wf) < 1e-12);
  }
}

TEST_CASE("two-subcarrier leakage sums by hand", "[interference]") {
  ChannelGains g;
  g.h_cu_bs = Eigen::VectorXd::Constant(2, 1.0);
  g.h_d2d_bs = Eigen::VectorXd::Constant(1, 0.5);
  g.h_cu_d2d = Eigen::MatrixXd::Constant(2, 1, 0.25);
  g.h_d2d_d2d = Eigen::MatrixXd::Constant(1, 1, 1.0);
  g.h_self = g.h_d2d_d2d.diagonal();
  SpectrumMap map;
  map.num_rbs = 2;
  map.subcarriers_per_rb = 2;
  map.rb_of_cu = {1, 0};
  map.rb_of_d2d = std::vector<int>{0};
  const InterferenceTable t(WaveformKind::ofdm(), WaveformKind::ofdm(), TableMethod::Psd, 2.0,
                            {0.0, 0.1, 0.4, 0.1, 0.0});
  TableSet tables{t, t, t, t};
  const SinrInputs in = make_sinr_inputs(g, map, tables, Waveform::Ofdm, 0.01);
  PowerAllocation p;
  p.p_d2d = Eigen::MatrixXd(1, 2);
  p.p_d2d << 1.0, 3.0;
  p.p_cu = Eigen::VectorXd::Constant(2, 4.0);
  // Pair on subcarriers {0, 1}; CU 1 shares them, CU 0 sits on {2, 3}.
  // Co-channel: (1 * (0.4 + 0.1) + 3 * (0.1 + 0.4)) / 2 = 1.0
  REQUIRE(omega_d2d_to_cu(in, p, 0, 1) == Approx(1.0));
  // Adjacent: subcarrier 1 -> 2 only, 3 * 0.1 / 2 = 0.15
  REQUIRE(omega_d2d_to_cu(in, p, 0, 0) == Approx(0.15));
  REQUIRE(cu_sinr(in, p, 1) == Approx(4.0 / (0.02 + 0.5)));
  // CU 1: (4/2/2) * (0.4 + 0.1) * 0.25; CU 0 reaches subcarrier 1 only through l = 1.
  REQUIRE(i_cu_at_d2d(in, p, 0, 0) == Approx(0.125));
  REQUIRE(i_cu_at_d2d(in, p, 0, 1) == Approx(0.125 + 0.025));
  REQUIRE(i_d2d_at(in, p, 0, 1) == 0.0);
  REQUIRE(d2d_sinr_actual(in, p, 0, 1) == Approx(3.0 / (0.01 + 0.15)));
  const Eigen::MatrixXd phi = cu_to_d2d_cost_matrix(in, p.p_cu);
  // RB 0: co-channel CU 1 (1.0 * 1.0 * 0.25 = 0.25 with coupling 2*0.4+2*0.1)
  // plus CU 0 through the single l = 1 pair (1.0 * 0.1 * 0.25).
  REQUIRE(phi(0, 0) == Approx(0.25 + 0.025));
  REQUIRE(phi(0, 1) == Approx(0.25 + 0.025));
}

TEST_CASE("linearity, monotonicity and truncation", "[interference]") {
  Rng rng(3);
  oracle::Toy t = oracle::make_toy(rng, 3, 2);
  const SinrInputs in = make_sinr_inputs(t.gains, t.map, t.tables, Waveform::Ofdm, t.noise);
  PowerAllocation doubled = t.power;
  doubled.p_d2d *= 2.0;
  for (int i = 0; i < 3; ++i) {
    REQUIRE(omega_d2d_to_cu(in, doubled, 0, i) == Approx(2.0 * omega_d2d_to_cu(in, t.power, 0, i)));
    REQUIRE(cu_sinr(in, doubled, i) < cu_sinr(in, t.power, i));
  }
  const Eigen::MatrixXd phi = cu_to_d2d_cost_matrix(in, t.power.p_cu);
  REQUIRE(cu_to_d2d_cost_matrix(in, 3.0 * t.power.p_cu).isApprox(3.0 * phi, 1e-14));
  REQUIRE(cu_to_d2d_cost_matrix(in, Eigen::VectorXd::Zero(3)).isZero(0.0));
  PowerAllocation quiet = t.power;
  quiet.p_cu.setZero();
  REQUIRE(i_cu_at_d2d(in, quiet, 0, 4) == 0.0);

  // Far apart: RBs 0 and 3 are 25+ subcarriers away with a span of 12.
  Rng r2(4);
  oracle::Toy far = oracle::make_toy(r2, 4, 2, 12);
  far.map.rb_of_cu = {0, 1, 2, 3};
  far.map.rb_of_d2d = std::vector<int>{0, 3};
  const SinrInputs fin = make_sinr_inputs(far.gains, far.map, far.tables, Waveform::Ofdm, far.noise);
  REQUIRE(omega_d2d_to_cu(fin, far.power, 0, 3) == 0.0);
  REQUIRE(i_d2d_at(fin, far.power, 1, 0) == 0.0);
}

TEST_CASE("without the D2D term SINR can only grow", "[interference]") {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Toy t = oracle::make_toy(rng, 3, 1 + trial % 3);
    const SinrInputs in = make_sinr_inputs(t.gains, t.map, t.tables, Waveform::Ofdm, t.noise);
    for (int j = 0; j < t.gains.num_pairs(); ++j)
      for (int m = 0; m < 12; ++m) {
        const double actual = d2d_sinr_actual(in, t.power, j, m);
        const double predicted = d2d_sinr_predicted(in, t.power, j, m);
        REQUIRE(predicted >= actual);
        if (t.gains.num_pairs() == 1) REQUIRE(predicted == actual);
        const double expected = t.power.p_d2d(j, m) * t.gains.h_self(j) /
                                (t.noise + i_cu_at_d2d(in, t.power, j, m) + i_d2d_at(in, t.power, j, m));
        REQUIRE(actual == Approx(expected).epsilon(1e-14));
      }
  }
}

TEST_CASE("SINR is invariant to a joint rescaling of powers and noise", "[interference]") {
  Rng rng(23);
  const oracle::Toy t = oracle::make_toy(rng, 3, 3);
  oracle::Toy u = t;
  u.power.p_cu *= 10.0;
  u.power.p_d2d *= 10.0;
  u.noise *= 10.0;
  for (Waveform wf : {Waveform::Ofdm, Waveform::FbmcOqam}) {
    const SinrInputs a = make_sinr_inputs(t.gains, t.map, t.tables, wf, t.noise);
    const SinrInputs b = make_sinr_inputs(u.gains, u.map, u.tables, wf, u.noise);
    for (int i = 0; i < 3; ++i) REQUIRE(cu_sinr(b, u.power, i) == Approx(cu_sinr(a, t.power, i)).epsilon(1e-13));
    for (int j = 0; j < 3; ++j)
      for (int m = 0; m < 12; ++m) {
        REQUIRE(d2d_sinr_actual(b, u.power, j, m) == Approx(d2d_sinr_actual(a, t.power, j, m)).epsilon(1e-13));
        REQUIRE(d2d_sinr_predicted(b, u.power, j, m) ==
                Approx(d2d_sinr_predicted(a, t.power, j, m)).epsilon(1e-13));
      }
  }
}

TEST_CASE("FBMC pairs on non-adjacent RBs barely interact", "[interference]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  const InterferenceTable ff = table_from_psd(WaveformKind::fbmc(), WaveformKind::fbmc(), f);
  Rng rng(2);
  oracle::Toy t = oracle::make_toy(rng, 3, 2);
  t.tables.fbmc_fbmc = ff;
  t.map.rb_of_d2d = std::vector<int>{0, 2};
  const SinrInputs in = make_sinr_inputs(t.gains, t.map, t.tables, Waveform::FbmcOqam, t.noise);
  for (int m = 0; m < 12; ++m) {
    double co_channel = 0.0;
    for (int n = 0; n < 12; ++n) co_channel += t.gains.h_d2d_d2d(1, 0) * t.power.p_d2d(1, n) / ff.reference_power() * ff(n - m);
    REQUIRE(i_d2d_at(in, t.power, 0, m) < 1e-6 * co_channel);
  }
}

TEST_CASE("spectrum map invariants", "[interference]") {
  Rng rng(1);
  SpectrumMap map = SpectrumMap::random(25, 12, rng);
  REQUIRE_NOTHROW(map.validate());
  std::vector<int> sorted = map.rb_of_cu;
  std::sort(sorted.begin(), sorted.end());
  for (int r = 0; r < 25; ++r) REQUIRE(sorted[static_cast<std::size_t>(r)] == r);
  map.rb_of_d2d = std::vector<int>{3, 3};
  REQUIRE_THROWS_AS(map.validate(), ValidationError);
  map.rb_of_d2d = std::vector<int>{3, 25};
  REQUIRE_THROWS_AS(map.validate(), ValidationError);
  map.rb_of_d2d.reset();
  map.rb_of_cu[0] = map.rb_of_cu[1];
  REQUIRE_THROWS_AS(map.validate(), ValidationError);
  REQUIRE(map.first_subcarrier(4) == 48);
}

TEST_CASE("RB coupling depends only on separation", "[interference]") {
  const InterferenceTable t(WaveformKind::ofdm(), WaveformKind::ofdm(), TableMethod::Psd, 1.0,
                            {0.01, 0.02, 0.1, 1.0, 0.1, 0.02, 0.01});
  REQUIRE(rb_coupling(t, 2, 0) == Approx(2 * 1.0 + 2 * 0.1));
  REQUIRE(rb_coupling(t, 2, 1) == Approx(0.02 + 0.1 + 0.01 + 0.02));
  REQUIRE(rb_coupling(t, 2, -1) == Approx(rb_coupling(t, 2, 1)));
  REQUIRE(rb_coupling(t, 2, 3) == 0.0);
}
