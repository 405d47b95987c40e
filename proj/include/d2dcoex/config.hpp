#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "d2dcoex/waveform.hpp"

namespace d2dcoex {

enum class Layout { Clustered, NonClustered };

std::string to_string(Layout layout);

/// One scenario; defaults reproduce the LTE-based macro-cell parameter set.
/// Powers are in dBm, distances in metres, frequencies in Hz.
struct ScenarioConfig {
  double cell_radius = 250.0;
  double carrier_freq = 700e6;
  double subcarrier_spacing = 15e3;
  int num_rbs = 25;
  int subcarriers_per_rb = 12;
  int num_cus = 25;
  int num_d2d_pairs = 10;
  Layout layout = Layout::Clustered;
  double cluster_radius_min = 50.0;   // ISD / 10
  double cluster_radius_max = 100.0;  // ISD / 5
  std::optional<double> cluster_radius_fixed;
  std::optional<double> cluster_distance_fixed;
  double d2d_max_link_factor = 2.0 / 3.0;
  double cu_min_sinr = 10.0;             // dB
  double noise_per_subcarrier = -127.0;  // dBm
  double max_tx_power = 24.0;            // dBm, D2D transmitter cap
  double cu_tx_power = 24.0;             // dBm per CU over its RB
  int iterations = 2000;
  std::uint64_t seed = 1;

  // Interference tables: loaded from table_dir when set, else generated.
  std::optional<std::filesystem::path> table_dir;
  TableMethod table_method = TableMethod::TimeSim;
  int table_fft_size = 256;
  int table_span = kDefaultHalfSpan;
  int table_offsets = 1000;
  int table_symbol_draws = 1000;
  std::uint64_t table_seed = 1;
  double cp_ratio = kDefaultCpRatio;
  double freq_offset_max = 0.0;  // subcarrier spacings

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  double noise_per_subcarrier_w() const;
  double max_tx_power_w() const;
  double cu_tx_power_w() const;
  double cu_min_sinr_linear() const;

  TableSetOptions table_options() const;
};

double dbm_to_watt(double dbm);
double db_to_linear(double db);

/// Parses `key = value` lines; `#` starts a comment. Keys are the field names
/// above. Unknown keys and malformed values raise ParseError.
ScenarioConfig parse_config(std::string_view text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);
std::string format_config(const ScenarioConfig& config);

/// Applies one `key = value` assignment; throws ConfigError for unknown keys or bad values.
void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Resolves the interference tables a config asks for (load or generate).
TableSet tables_for(const ScenarioConfig& config);

}  // namespace d2dcoex
