#include "d2dcoex/waveform.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/rng.hpp"

namespace d2dcoex {
namespace {

using cplx = std::complex<double>;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int cp_samples(const WaveformKind& w, int fft_size) {
  return w.kind == Waveform::Ofdm ? static_cast<int>(std::lround(w.cp_ratio * fft_size)) : 0;
}

// Transmit side of one subcarrier: a train of pulses spaced by `period`.
struct TxModel {
  std::vector<double> pulse;
  int period = 0;
  bool oqam = false;  // real symbols with a j^k phase progression
};

// Receive side: matched/rectangular filter applied from `window_offset`
// samples after the start of the victim's own symbol.
struct RxModel {
  std::vector<double> filter;
  int window_offset = 0;
  int symbol_duration = 0;
};

TxModel make_tx(const WaveformKind& w, const PrototypeFilter& filter) {
  const int n = filter.fft_size;
  if (w.kind == Waveform::Ofdm) {
    const int len = n + cp_samples(w, n);
    return {std::vector<double>(static_cast<std::size_t>(len), 1.0 / std::sqrt(n)), len, false};
  }
  return {filter.impulse_response, n / 2, true};
}

RxModel make_rx(const WaveformKind& w, const PrototypeFilter& filter) {
  const int n = filter.fft_size;
  if (w.kind == Waveform::Ofdm) {
    const int cp = cp_samples(w, n);
    return {std::vector<double>(static_cast<std::size_t>(n), 1.0 / std::sqrt(n)), cp, n + cp};
  }
  return {filter.impulse_response, 0, n};
}

void check_span(int half_span) {
  if (half_span < 1) throw ConfigError("half_span must be at least 1");
}

std::vector<double> symmetrised(std::vector<double> v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double m = 0.5 * (v[i] + v[n - 1 - i]);
    v[i] = m;
    v[n - 1 - i] = m;
  }
  return v;
}

}  // namespace

void WaveformKind::validate() const {
  if (!(cp_ratio >= 0.0 && cp_ratio <= 0.25))
    throw ConfigError("cp_ratio must lie in [0, 0.25], got " + std::to_string(cp_ratio));
  if (kind == Waveform::FbmcOqam && cp_ratio != 0.0)
    throw ConfigError("FBMC/OQAM has no cyclic prefix; cp_ratio must be 0");
}

std::string to_string(Waveform w) { return w == Waveform::Ofdm ? "ofdm" : "fbmc"; }

std::string to_string(const WaveformKind& w) {
  if (w.kind == Waveform::FbmcOqam) return "fbmc";
  char buf[64];
  std::snprintf(buf, sizeof buf, "ofdm@%.17g", w.cp_ratio);
  return buf;
}

WaveformKind parse_waveform_kind(std::string_view text) {
  if (text == "fbmc" || text == "fbmc_oqam") return WaveformKind::fbmc();
  if (text == "ofdm") return WaveformKind::ofdm();
  if (text.starts_with("ofdm@")) {
    const std::string num(text.substr(5));
    char* end = nullptr;
    const double cp = std::strtod(num.c_str(), &end);
    if (num.empty() || end != num.c_str() + num.size())
      throw ConfigError("bad cyclic-prefix ratio in waveform '" + std::string(text) + "'");
    WaveformKind w = WaveformKind::ofdm(cp);
    w.validate();
    return w;
  }
  throw ConfigError("unknown waveform '" + std::string(text) + "'");
}

std::string to_string(TableMethod m) { return m == TableMethod::Psd ? "psd" : "time"; }

TableMethod parse_table_method(std::string_view text) {
  if (text == "psd") return TableMethod::Psd;
  if (text == "time" || text == "time_sim") return TableMethod::TimeSim;
  throw ConfigError("unknown table method '" + std::string(text) + "'");
}

PrototypeFilter build_phydyas_filter(int overlap_factor, int fft_size) {
  if (overlap_factor != 4)
    throw UnsupportedParameter("PHYDYAS filter: overlap factor " + std::to_string(overlap_factor) +
                               " is not supported (only 4)");
  if (!is_power_of_two(fft_size) || fft_size < 64)
    throw UnsupportedParameter("PHYDYAS filter: fft_size must be a power of two >= 64, got " +
                               std::to_string(fft_size));

  PrototypeFilter f;
  f.overlap_factor = overlap_factor;
  f.fft_size = fft_size;
  f.freq_coeffs = {1.0, 0.971960, std::numbers::sqrt2 / 2.0, 0.235147};

  const int len = overlap_factor * fft_size;
  f.impulse_response.resize(static_cast<std::size_t>(len));
  double energy = 0.0;
  for (int n = 0; n < len; ++n) {
    double h = f.freq_coeffs[0];
    for (int k = 1; k < overlap_factor; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      h += 2.0 * sign * f.freq_coeffs[static_cast<std::size_t>(k)] *
           std::cos(2.0 * std::numbers::pi * k * n / len);
    }
    f.impulse_response[static_cast<std::size_t>(n)] = h;
    energy += h * h;
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (double& h : f.impulse_response) h *= scale;
  return f;
}

InterferenceTable::InterferenceTable(WaveformKind interferer, WaveformKind victim, TableMethod method,
                                     double reference_power, std::vector<double> coeffs)
    : interferer_(interferer),
      victim_(victim),
      method_(method),
      reference_power_(reference_power),
      coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 3 || coeffs_.size() % 2 == 0)
    throw ValidationError("interference table needs an odd number (>= 3) of coefficients");
  if (!(reference_power_ > 0.0) || !std::isfinite(reference_power_))
    throw ValidationError("reference_power must be positive");
  half_span_ = static_cast<int>(coeffs_.size() / 2);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!std::isfinite(coeffs_[i]) || coeffs_[i] < 0.0)
      throw ValidationError("interference coefficient at l=" +
                            std::to_string(static_cast<int>(i) - half_span_) +
                            " must be finite and nonnegative");
  }
}

double InterferenceTable::tail_sum(int from) const noexcept {
  double s = 0.0;
  for (int l = -half_span_; l <= half_span_; ++l)
    if (std::abs(l) >= from) s += (*this)(l);
  return s;
}

InterferenceTable table_from_psd(const WaveformKind& interferer, const WaveformKind& victim,
                                 const PrototypeFilter& filter, int half_span) {
  check_span(half_span);
  interferer.validate();
  victim.validate();
  const TxModel tx = make_tx(interferer, filter);
  const int n = filter.fft_size;
  const auto len = static_cast<int>(tx.pulse.size());

  // |G(f)|^2 = sum_t R(t) exp(-j 2 pi f t / N) with R the pulse autocorrelation,
  // so the band integral over [l - 1/2, l + 1/2] is a cosine-sinc series in R.
  std::vector<double> acf(static_cast<std::size_t>(len), 0.0);
  for (int t = 0; t < len; ++t) {
    double s = 0.0;
    for (int i = 0; i + t < len; ++i) s += tx.pulse[static_cast<std::size_t>(i)] * tx.pulse[static_cast<std::size_t>(i + t)];
    acf[static_cast<std::size_t>(t)] = s;
  }
  const double total = n * acf[0];

  std::vector<double> coeffs(static_cast<std::size_t>(2 * half_span + 1));
  for (int l = -half_span; l <= half_span; ++l) {
    double s = acf[0];
    for (int t = 1; t < len; ++t) {
      const double x = std::numbers::pi * t / n;
      s += 2.0 * acf[static_cast<std::size_t>(t)] * std::cos(2.0 * x * l) * std::sin(x) / x;
    }
    coeffs[static_cast<std::size_t>(l + half_span)] = std::max(0.0, s / total);
  }
  return InterferenceTable(interferer, victim, TableMethod::Psd, 1.0, symmetrised(std::move(coeffs)));
}

InterferenceTable table_from_time_sim(const WaveformKind& interferer, const WaveformKind& victim,
                                      const PrototypeFilter& filter, int half_span,
                                      const TimeSimOptions& options) {
  check_span(half_span);
  interferer.validate();
  victim.validate();
  if (options.num_offsets < 100) throw ConfigError("time simulation needs at least 100 offsets");
  if (options.symbol_draws < 1) throw ConfigError("symbol_draws must be positive");
  if (!(options.max_freq_offset >= 0.0 && options.max_freq_offset <= 0.5))
    throw ConfigError("max_freq_offset must lie in [0, 0.5] subcarrier spacings");

  const TxModel tx = make_tx(interferer, filter);
  const RxModel rx = make_rx(victim, filter);
  const int n = filter.fft_size;
  const int num_l = 2 * half_span + 1;
  const auto len_p = static_cast<int>(tx.pulse.size());
  const auto len_r = static_cast<int>(rx.filter.size());

  std::vector<cplx> twiddle(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) twiddle[static_cast<std::size_t>(q)] = std::polar(1.0, -2.0 * std::numbers::pi * q / n);

  std::vector<double> acc(static_cast<std::size_t>(num_l), 0.0);
  std::vector<cplx> coef;  // [symbol][l]
  std::vector<cplx> product;
  std::vector<cplx> y(static_cast<std::size_t>(num_l));
  std::vector<cplx> symbols;

  for (int o = 0; o < options.num_offsets; ++o) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(o)));
    int tau = 0;
    if (!options.force_zero_timing) {
      const double u = (o + rng.uniform()) / options.num_offsets;
      tau = std::min(rx.symbol_duration - 1, static_cast<int>(std::floor(u * rx.symbol_duration)));
    }
    const double delta = options.max_freq_offset > 0.0
                             ? rng.uniform(-options.max_freq_offset, options.max_freq_offset)
                             : 0.0;

    const int t0 = tau + rx.window_offset;
    const int k_lo = static_cast<int>(std::floor(static_cast<double>(t0 - len_p + 1) / tx.period));
    const int k_hi = static_cast<int>(std::floor(static_cast<double>(t0 + len_r - 1) / tx.period));
    const int num_k = k_hi - k_lo + 1;
    coef.assign(static_cast<std::size_t>(num_k * num_l), cplx{});

    for (int k = k_lo; k <= k_hi; ++k) {
      const int start = k * tx.period;
      const int a = std::max(start, t0);
      const int b = std::min(start + len_p, t0 + len_r);
      if (b <= a) continue;
      product.resize(static_cast<std::size_t>(b - a));
      for (int t = a; t < b; ++t) {
        const double amp = tx.pulse[static_cast<std::size_t>(t - start)] * rx.filter[static_cast<std::size_t>(t - t0)];
        product[static_cast<std::size_t>(t - a)] =
            delta == 0.0 ? cplx(amp, 0.0) : amp * std::polar(1.0, 2.0 * std::numbers::pi * delta * t / n);
      }
      cplx* row = &coef[static_cast<std::size_t>((k - k_lo) * num_l)];
      for (int li = 0; li < num_l; ++li) {
        const int l = li - half_span;
        const int step = ((l % n) + n) % n;
        int q = static_cast<int>((static_cast<long long>(step) * (a - t0)) % n);
        cplx s{};
        for (std::size_t i = 0; i < product.size(); ++i) {
          s += product[i] * twiddle[static_cast<std::size_t>(q)];
          q += step;
          if (q >= n) q -= n;
        }
        row[li] = s;
      }
    }

    // Random QPSK symbols; for OQAM each real symbol carries half the power.
    symbols.resize(static_cast<std::size_t>(num_k));
    std::vector<double> local(static_cast<std::size_t>(num_l), 0.0);
    for (int d = 0; d < options.symbol_draws; ++d) {
      for (int k = 0; k < num_k; ++k) {
        const std::uint64_t bits = rng.next();
        if (tx.oqam) {
          const double a = ((bits & 1U) ? 1.0 : -1.0) * std::numbers::sqrt2 / 2.0;
          static constexpr cplx kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
          symbols[static_cast<std::size_t>(k)] = a * kPhase[(((k + k_lo) % 4) + 4) % 4];
        } else {
          const double s = std::numbers::sqrt2 / 2.0;
          symbols[static_cast<std::size_t>(k)] = {(bits & 1U) ? s : -s, (bits & 2U) ? s : -s};
        }
      }
      std::fill(y.begin(), y.end(), cplx{});
      for (int k = 0; k < num_k; ++k) {
        const cplx sym = symbols[static_cast<std::size_t>(k)];
        const cplx* row = &coef[static_cast<std::size_t>(k * num_l)];
        for (int li = 0; li < num_l; ++li) y[static_cast<std::size_t>(li)] += sym * row[li];
      }
      for (int li = 0; li < num_l; ++li) local[static_cast<std::size_t>(li)] += std::norm(y[static_cast<std::size_t>(li)]);
    }
    for (int li = 0; li < num_l; ++li)
      acc[static_cast<std::size_t>(li)] += local[static_cast<std::size_t>(li)] / options.symbol_draws;
  }

  for (double& v : acc) v /= options.num_offsets;
  return InterferenceTable(interferer, victim, TableMethod::TimeSim, 1.0, symmetrised(std::move(acc)));
}

const InterferenceTable& TableSet::get(Waveform interferer, Waveform victim) const noexcept {
  if (interferer == Waveform::Ofdm) return victim == Waveform::Ofdm ? ofdm_ofdm : ofdm_fbmc;
  return victim == Waveform::Ofdm ? fbmc_ofdm : fbmc_fbmc;
}

TableSet generate_table_set(const TableSetOptions& options) {
  const PrototypeFilter filter = build_phydyas_filter(4, options.fft_size);
  const WaveformKind ofdm = WaveformKind::ofdm(options.cp_ratio);
  const WaveformKind fbmc = WaveformKind::fbmc();
  auto make = [&](const WaveformKind& a, const WaveformKind& b, std::uint64_t stream) {
    if (options.method == TableMethod::Psd) return table_from_psd(a, b, filter, options.half_span);
    TimeSimOptions o = options.time_sim;
    o.seed = derive_seed(options.time_sim.seed, stream);
    return table_from_time_sim(a, b, filter, options.half_span, o);
  };
  return {make(ofdm, ofdm, 0), make(ofdm, fbmc, 1), make(fbmc, ofdm, 2), make(fbmc, fbmc, 3)};
}

std::string table_file_name(Waveform interferer, Waveform victim) {
  return to_string(interferer) + "_" + to_string(victim) + ".csv";
}

}  // namespace d2dcoex
