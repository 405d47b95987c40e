#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/waveform.hpp"

using namespace d2dcoex;
using Catch::Approx;

namespace {

// Exact expectations over symbols and all integer timing offsets at N = 64,
// produced by tests/oracles/table_oracle.py (l = 0..4).
struct Reference {
  WaveformKind a, b;
  double v[5];
};

const Reference kTimeRef[] = {
    {WaveformKind::ofdm(), WaveformKind::ofdm(),
     {0.6908967391, 0.09405458837, 0.02357039604, 0.01051793037, 0.0059497605}},
    {WaveformKind::ofdm(), WaveformKind::fbmc(),
     {0.7689715171, 0.08576279787, 0.0125015818, 0.00514330623, 0.002834637844}},
    {WaveformKind::fbmc(), WaveformKind::ofdm(),
     {0.7367314738, 0.09669640927, 0.01450491022, 0.006002922311, 0.003310226226}},
    {WaveformKind::fbmc(), WaveformKind::fbmc(),
     {0.8230607867, 0.08846858204, 1.083264097e-06, 2.079448286e-08, 2.515052446e-09}},
};

const double kPsdOfdm[] = {0.8029623978, 0.06881244248, 0.01199225468, 0.004987639687, 0.002745875636};
const double kPsdFbmc[] = {0.8737961012, 0.06310162397, 3.144805662e-07, 9.333973822e-09, 1.198846494e-09};

// Rectangular OFDM receiver seeing a continuous complex exponential from the
// interferer's symbols (CP included) at every integer timing offset.
double ofdm_ratio_brute_force(int n, int ncp) {
  const int period = n + ncp;
  double p0 = 0.0, p1 = 0.0;
  for (int tau = 0; tau < period; ++tau) {
    for (int s = -1; s <= 1; ++s) {
      const int start = s * period + tau;
      const int lo = std::max(start, ncp), hi = std::min(start + period, ncp + n);
      if (hi <= lo) continue;
      std::complex<double> c0{}, c1{};
      for (int t = lo; t < hi; ++t) {
        c0 += 1.0;
        c1 += std::polar(1.0, -2.0 * std::numbers::pi * (t - ncp) / n);
      }
      p0 += std::norm(c0);
      p1 += std::norm(c1);
    }
  }
  return p1 / p0;
}

}  // namespace

TEST_CASE("PHYDYAS filter", "[waveform]") {
  const PrototypeFilter f = build_phydyas_filter(4, 1024);
  REQUIRE(f.impulse_response.size() == 4096);
  REQUIRE(f.freq_coeffs.size() == 4);
  REQUIRE(f.freq_coeffs[1] == Approx(0.971960));
  REQUIRE(f.freq_coeffs[2] == Approx(std::sqrt(2.0) / 2));
  REQUIRE(f.freq_coeffs[3] == Approx(0.235147));
  REQUIRE(f.freq_coeffs[1] * f.freq_coeffs[1] + f.freq_coeffs[3] * f.freq_coeffs[3] == Approx(1.0).margin(1e-6));

  double e = 0.0;
  for (double h : f.impulse_response) e += h * h;
  REQUIRE(std::abs(e - 1.0) < 1e-12);

  // Reconstruct the frequency samples from the impulse response: the DFT at
  // bin k of the KN-point response is proportional to (-1)^k P_k.
  const int len = 4096;
  std::vector<double> bins(4);
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int n = 0; n < len; ++n) s += f.impulse_response[n] * std::cos(2.0 * std::numbers::pi * k * n / len);
    bins[k] = s * ((k % 2) ? -1.0 : 1.0);
  }
  for (int k = 1; k < 4; ++k) REQUIRE(bins[k] / bins[0] == Approx(f.freq_coeffs[k]).epsilon(1e-9));

  // Linear phase: symmetric about the centre sample.
  for (int n = 1; n < len / 2; ++n) REQUIRE(f.impulse_response[n] == Approx(f.impulse_response[len - n]).margin(1e-15));

  REQUIRE_THROWS_AS(build_phydyas_filter(3, 1024), UnsupportedParameter);
  REQUIRE_THROWS(build_phydyas_filter(4, 100));
  REQUIRE_THROWS(build_phydyas_filter(4, 32));
}

TEST_CASE("waveform kinds", "[waveform]") {
  REQUIRE(parse_waveform_kind("fbmc") == WaveformKind::fbmc());
  REQUIRE(parse_waveform_kind("ofdm@0.125") == WaveformKind::ofdm(0.125));
  REQUIRE(parse_waveform_kind(to_string(WaveformKind::ofdm())) == WaveformKind::ofdm());
  REQUIRE_THROWS(parse_waveform_kind("ufmc"));
  REQUIRE_THROWS(WaveformKind::ofdm(0.3).validate());
  REQUIRE_THROWS((WaveformKind{Waveform::FbmcOqam, 0.1}).validate());
}

TEST_CASE("PSD tables match direct DTFT integration", "[waveform][psd]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  const InterferenceTable o = table_from_psd(WaveformKind::ofdm(), WaveformKind::ofdm(), f, 4);
  const InterferenceTable b = table_from_psd(WaveformKind::fbmc(), WaveformKind::fbmc(), f, 4);
  REQUIRE(o.method() == TableMethod::Psd);
  REQUIRE(o.reference_power() == 1.0);
  for (int l = 0; l <= 4; ++l) {
    REQUIRE(o(l) == Approx(kPsdOfdm[l]).epsilon(1e-6));
    REQUIRE(b(l) == Approx(kPsdFbmc[l]).epsilon(1e-6));
  }
  REQUIRE(o(5) == 0.0);
  REQUIRE(o(-5) == 0.0);
}

TEST_CASE("PSD table properties at the default span", "[waveform][psd]") {
  const PrototypeFilter f = build_phydyas_filter(4, 256);
  const InterferenceTable o = table_from_psd(WaveformKind::ofdm(), WaveformKind::ofdm(), f, kDefaultHalfSpan);
  const InterferenceTable b = table_from_psd(WaveformKind::fbmc(), WaveformKind::fbmc(), f, kDefaultHalfSpan);
  for (int l = 1; l < kDefaultHalfSpan; ++l) REQUIRE(o(l + 1) <= o(l));
  for (int l = 2; l <= kDefaultHalfSpan; ++l) REQUIRE(b(l) < 1e-4 * b(0));
  for (const auto* t : {&o, &b}) {
    double total = 0.0;
    for (int l = -kDefaultHalfSpan; l <= kDefaultHalfSpan; ++l) {
      REQUIRE((*t)(l) >= 0.0);
      REQUIRE(std::abs((*t)(l) - (*t)(-l)) < 1e-9);
      total += (*t)(l);
    }
    REQUIRE(total <= 1.0 + 1e-6);
  }
}

TEST_CASE("time-domain tables match the exact expectation", "[waveform][time]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  TimeSimOptions o;
  o.num_offsets = 1000;
  o.symbol_draws = 1000;
  for (const Reference& r : kTimeRef) {
    INFO(to_string(r.a) << " -> " << to_string(r.b));
    const InterferenceTable t = table_from_time_sim(r.a, r.b, f, 4, o);
    REQUIRE(t.method() == TableMethod::TimeSim);
    for (int l = 0; l <= 4; ++l) {
      INFO("l = " << l);
      REQUIRE(t(l) == Approx(r.v[l]).epsilon(0.02));
      REQUIRE(std::abs(t(l) - t(-l)) < 1e-9);
    }
  }
}

TEST_CASE("aligned OFDM delivers its full power", "[waveform][time]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  TimeSimOptions o;
  o.num_offsets = 100;
  o.symbol_draws = 10;
  o.force_zero_timing = true;
  const InterferenceTable t = table_from_time_sim(WaveformKind::ofdm(), WaveformKind::ofdm(), f, 4, o);
  REQUIRE(t(0) == Approx(1.0).epsilon(0.02));
  for (int l = 1; l <= 4; ++l) REQUIRE(t(l) < 1e-20);
}

TEST_CASE("OFDM adjacent-leakage ratio matches a direct DFT brute force", "[waveform][time]") {
  const int n = 64;
  const PrototypeFilter f = build_phydyas_filter(4, n);
  TimeSimOptions o;
  o.num_offsets = 1000;
  o.symbol_draws = 500;
  const InterferenceTable t = table_from_time_sim(WaveformKind::ofdm(), WaveformKind::ofdm(), f, 2, o);
  const double expected = ofdm_ratio_brute_force(n, static_cast<int>(std::lround(n * kDefaultCpRatio)));
  REQUIRE(t(1) / t(0) == Approx(expected).epsilon(0.02));
}

TEST_CASE("time simulation is deterministic in its seed", "[waveform][time]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  TimeSimOptions o;
  o.num_offsets = 100;
  o.symbol_draws = 20;
  o.seed = 9;
  const auto a = table_from_time_sim(WaveformKind::fbmc(), WaveformKind::ofdm(), f, 3, o);
  const auto b = table_from_time_sim(WaveformKind::fbmc(), WaveformKind::ofdm(), f, 3, o);
  REQUIRE(a.coeffs() == b.coeffs());
  o.seed = 10;
  const auto c = table_from_time_sim(WaveformKind::fbmc(), WaveformKind::ofdm(), f, 3, o);
  REQUIRE(a.coeffs() != c.coeffs());

  o.num_offsets = 99;
  REQUIRE_THROWS(table_from_time_sim(WaveformKind::fbmc(), WaveformKind::ofdm(), f, 3, o));
}

TEST_CASE("frequency offsets spread FBMC leakage", "[waveform][time]") {
  const PrototypeFilter f = build_phydyas_filter(4, 64);
  TimeSimOptions o;
  o.num_offsets = 200;
  o.symbol_draws = 200;
  const auto base = table_from_time_sim(WaveformKind::fbmc(), WaveformKind::fbmc(), f, 3, o);
  o.max_freq_offset = 0.5;
  const auto shifted = table_from_time_sim(WaveformKind::fbmc(), WaveformKind::fbmc(), f, 3, o);
  REQUIRE(shifted(2) > 10 * base(2));
  REQUIRE(shifted(0) < base(0));
}

TEST_CASE("table construction validates coefficients", "[waveform]") {
  REQUIRE_THROWS_AS(InterferenceTable(WaveformKind::fbmc(), WaveformKind::fbmc(), TableMethod::Psd, 1.0, {0.1, -0.1, 0.1}),
                    ValidationError);
  REQUIRE_THROWS_AS(InterferenceTable(WaveformKind::fbmc(), WaveformKind::fbmc(), TableMethod::Psd, 1.0, {0.1, 0.1}),
                    ValidationError);
  const InterferenceTable t(WaveformKind::fbmc(), WaveformKind::fbmc(), TableMethod::Psd, 1.0, {0.1, 0.5, 0.2});
  REQUIRE(t.half_span() == 1);
  REQUIRE(t(-1) == 0.1);
  REQUIRE(t(2) == 0.0);
  REQUIRE(t.tail_sum(1) == Approx(0.3));
}
