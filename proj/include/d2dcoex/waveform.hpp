#pragma once

// Multicarrier prototype filters and mean interference tables.
//
// An interference table I{A->B}(l) holds the mean power that one subcarrier of
// waveform A, transmitted at unit power, leaks into the detector of a waveform-B
// subcarrier located l subcarriers away when the two links are not synchronised.
// Two generators are provided: a PSD-integration model and a time-domain
// Monte Carlo over timing (and optionally frequency) offsets.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace d2dcoex {

enum class Waveform { Ofdm, FbmcOqam };

/// Cyclic prefix of an LTE normal-CP symbol, averaged over the slot.
inline constexpr double kDefaultCpRatio = 1.0 / 14.0;

struct WaveformKind {
  Waveform kind = Waveform::Ofdm;
  double cp_ratio = 0.0;  ///< CP length / FFT size; 0 for FBMC/OQAM.

  static WaveformKind ofdm(double cp_ratio = kDefaultCpRatio) { return {Waveform::Ofdm, cp_ratio}; }
  static WaveformKind fbmc() { return {Waveform::FbmcOqam, 0.0}; }

  /// Throws ConfigError if cp_ratio is outside [0, 0.25] or nonzero for FBMC.
  void validate() const;

  friend bool operator==(const WaveformKind&, const WaveformKind&) = default;
};

std::string to_string(Waveform w);
std::string to_string(const WaveformKind& w);
/// Accepts "ofdm", "ofdm@<cp_ratio>", "fbmc" (also "fbmc_oqam").
WaveformKind parse_waveform_kind(std::string_view text);

struct PrototypeFilter {
  int overlap_factor = 0;
  std::vector<double> freq_coeffs;       ///< frequency-sampling values P_0..P_{K-1}
  std::vector<double> impulse_response;  ///< K * fft_size samples, unit energy
  int fft_size = 0;
};

/// PHYDYAS prototype filter. Only overlap_factor = 4 is supported; fft_size must
/// be a power of two no smaller than 64.
PrototypeFilter build_phydyas_filter(int overlap_factor, int fft_size);

enum class TableMethod { Psd, TimeSim };

std::string to_string(TableMethod m);
TableMethod parse_table_method(std::string_view text);

class InterferenceTable {
 public:
  InterferenceTable() = default;
  /// `coeffs` holds I(-L) .. I(L). Throws ValidationError on a size mismatch or
  /// a negative/non-finite coefficient.
  InterferenceTable(WaveformKind interferer, WaveformKind victim, TableMethod method,
                    double reference_power, std::vector<double> coeffs);

  const WaveformKind& interferer() const noexcept { return interferer_; }
  const WaveformKind& victim() const noexcept { return victim_; }
  TableMethod method() const noexcept { return method_; }
  int half_span() const noexcept { return half_span_; }
  double reference_power() const noexcept { return reference_power_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  /// I(l); zero outside [-L, L].
  double operator()(int l) const noexcept {
    return (l < -half_span_ || l > half_span_) ? 0.0 : coeffs_[static_cast<std::size_t>(l + half_span_)];
  }

  /// Sum of I(l) over |l| >= from.
  double tail_sum(int from) const noexcept;

 private:
  WaveformKind interferer_;
  WaveformKind victim_;
  TableMethod method_ = TableMethod::Psd;
  int half_span_ = 0;
  double reference_power_ = 1.0;
  std::vector<double> coeffs_;
};

inline constexpr int kDefaultHalfSpan = 36;

/// Interferer PSD integrated over the victim subcarrier band [l - 1/2, l + 1/2]
/// (subcarrier units), normalised so the whole PSD integrates to one. The
/// victim's receive filter plays no role in this model.
InterferenceTable table_from_psd(const WaveformKind& interferer, const WaveformKind& victim,
                                 const PrototypeFilter& filter, int half_span = kDefaultHalfSpan);

struct TimeSimOptions {
  int num_offsets = 1000;    ///< timing-offset samples, at least 100
  int symbol_draws = 1000;   ///< random QPSK draws averaged per offset
  std::uint64_t seed = 1;
  double max_freq_offset = 0.0;  ///< in subcarrier spacings; 0 disables, 0.5 = +/-7.5 kHz
  bool force_zero_timing = false;
};

/// Time-domain Monte Carlo estimate of the mean interference table. Symbols are
/// sent on one interferer subcarrier and demodulated by the victim receiver at
/// spectral distance l, with a timing offset drawn uniformly over one victim
/// symbol duration (stratified over num_offsets strata). Deterministic in seed.
InterferenceTable table_from_time_sim(const WaveformKind& interferer, const WaveformKind& victim,
                                      const PrototypeFilter& filter, int half_span,
                                      const TimeSimOptions& options);

/// CSV persistence; see README for the schema.
void save_table(const InterferenceTable& table, const std::filesystem::path& path);
InterferenceTable load_table(const std::filesystem::path& path);
std::string format_table(const InterferenceTable& table);
InterferenceTable parse_table(std::string_view text, const std::string& source = "<table>");

/// The four waveform pairings needed by the system model.
struct TableSet {
  InterferenceTable ofdm_ofdm;
  InterferenceTable ofdm_fbmc;
  InterferenceTable fbmc_ofdm;
  InterferenceTable fbmc_fbmc;

  const InterferenceTable& get(Waveform interferer, Waveform victim) const noexcept;
};

struct TableSetOptions {
  TableMethod method = TableMethod::TimeSim;
  int fft_size = 256;
  int half_span = kDefaultHalfSpan;
  double cp_ratio = kDefaultCpRatio;
  TimeSimOptions time_sim;
};

TableSet generate_table_set(const TableSetOptions& options);

/// Loads `<dir>/<interferer>_<victim>.csv` for the four pairings.
TableSet load_table_set(const std::filesystem::path& dir);
void save_table_set(const TableSet& tables, const std::filesystem::path& dir);
std::string table_file_name(Waveform interferer, Waveform victim);

}  // namespace d2dcoex
