#include "d2dcoex/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "d2dcoex/errors.hpp"
#include "d2dcoex/io.hpp"

namespace d2dcoex {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(std::string(key) + ": expected a number, found '" + s + "'");
  return v;
}

long long to_integer(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw ConfigError(std::string(key) + ": expected an integer, found '" + s + "'");
  return v;
}

int to_int(std::string_view key, std::string_view value) {
  const long long v = to_integer(key, value);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(std::string(key) + ": value out of range");
  return static_cast<int>(v);
}

std::optional<double> to_optional(std::string_view key, std::string_view value) {
  if (value.empty() || value == "none") return std::nullopt;
  return to_double(key, value);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Layout layout) {
  return layout == Layout::Clustered ? "clustered" : "non_clustered";
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double ScenarioConfig::noise_per_subcarrier_w() const { return dbm_to_watt(noise_per_subcarrier); }
double ScenarioConfig::max_tx_power_w() const { return dbm_to_watt(max_tx_power); }
double ScenarioConfig::cu_tx_power_w() const { return dbm_to_watt(cu_tx_power); }
double ScenarioConfig::cu_min_sinr_linear() const { return db_to_linear(cu_min_sinr); }

void ScenarioConfig::validate() const {
  require(cell_radius > 0.0, "cell_radius must be positive");
  require(carrier_freq > 0.0, "carrier_freq must be positive");
  require(subcarrier_spacing > 0.0, "subcarrier_spacing must be positive");
  require(num_rbs >= 1, "num_rbs must be at least 1");
  require(subcarriers_per_rb >= 1, "subcarriers_per_rb must be at least 1");
  require(num_d2d_pairs >= 1, "num_d2d_pairs must be at least 1");
  require(num_d2d_pairs <= num_rbs, "num_d2d_pairs (" + std::to_string(num_d2d_pairs) +
                                        ") must not exceed num_rbs (" + std::to_string(num_rbs) +
                                        "): each pair reuses a distinct RB");
  require(num_cus == num_rbs, "num_cus (" + std::to_string(num_cus) + ") must equal num_rbs (" +
                                  std::to_string(num_rbs) + "): the cell is fully loaded");
  require(cluster_radius_min > 0.0, "cluster_radius_min must be positive");
  require(cluster_radius_max > 0.0, "cluster_radius_max must be positive");
  require(cluster_radius_min <= cluster_radius_max, "cluster_radius_min must not exceed cluster_radius_max");
  require(d2d_max_link_factor > 0.0, "d2d_max_link_factor must be positive");
  require(iterations >= 1, "iterations must be at least 1");
  if (cluster_radius_fixed) require(*cluster_radius_fixed > 0.0, "cluster_radius_fixed must be positive");
  if (cluster_distance_fixed) require(*cluster_distance_fixed >= 0.0, "cluster_distance_fixed must be nonnegative");
  if (layout == Layout::Clustered) {
    const double r = cluster_radius_fixed.value_or(cluster_radius_max);
    require(r <= cell_radius, "cluster radius " + num(r) + " m does not fit in a cell of radius " +
                                  num(cell_radius) + " m");
    if (cluster_distance_fixed)
      require(*cluster_distance_fixed + r <= cell_radius,
              "cluster_distance_fixed + cluster radius (" + num(*cluster_distance_fixed + r) +
                  " m) exceeds cell_radius (" + num(cell_radius) + " m)");
  }
  require(table_fft_size >= 64 && (table_fft_size & (table_fft_size - 1)) == 0,
          "table_fft_size must be a power of two >= 64");
  require(table_span >= 1, "table_span must be at least 1");
  require(table_offsets >= 100, "table_offsets must be at least 100");
  require(table_symbol_draws >= 1, "table_symbol_draws must be at least 1");
  require(cp_ratio >= 0.0 && cp_ratio <= 0.25, "cp_ratio must lie in [0, 0.25]");
  require(freq_offset_max >= 0.0 && freq_offset_max <= 0.5, "freq_offset_max must lie in [0, 0.5]");
}

TableSetOptions ScenarioConfig::table_options() const {
  TableSetOptions o;
  o.method = table_method;
  o.fft_size = table_fft_size;
  o.half_span = table_span;
  o.cp_ratio = cp_ratio;
  o.time_sim.num_offsets = table_offsets;
  o.time_sim.symbol_draws = table_symbol_draws;
  o.time_sim.seed = table_seed;
  o.time_sim.max_freq_offset = freq_offset_max;
  return o;
}

void set_config_value(ScenarioConfig& c, std::string_view key, std::string_view value) {
  if (key == "cell_radius") c.cell_radius = to_double(key, value);
  else if (key == "carrier_freq") c.carrier_freq = to_double(key, value);
  else if (key == "subcarrier_spacing") c.subcarrier_spacing = to_double(key, value);
  else if (key == "num_rbs") c.num_rbs = to_int(key, value);
  else if (key == "subcarriers_per_rb") c.subcarriers_per_rb = to_int(key, value);
  else if (key == "num_cus") c.num_cus = to_int(key, value);
  else if (key == "num_d2d_pairs") c.num_d2d_pairs = to_int(key, value);
  else if (key == "layout") {
    if (value == "clustered") c.layout = Layout::Clustered;
    else if (value == "non_clustered") c.layout = Layout::NonClustered;
    else throw ConfigError("layout: expected 'clustered' or 'non_clustered', found '" + std::string(value) + "'");
  }
  else if (key == "cluster_radius_min") c.cluster_radius_min = to_double(key, value);
  else if (key == "cluster_radius_max") c.cluster_radius_max = to_double(key, value);
  else if (key == "cluster_radius_fixed") c.cluster_radius_fixed = to_optional(key, value);
  else if (key == "cluster_distance_fixed") c.cluster_distance_fixed = to_optional(key, value);
  else if (key == "d2d_max_link_factor") c.d2d_max_link_factor = to_double(key, value);
  else if (key == "cu_min_sinr") c.cu_min_sinr = to_double(key, value);
  else if (key == "noise_per_subcarrier") c.noise_per_subcarrier = to_double(key, value);
  else if (key == "max_tx_power") c.max_tx_power = to_double(key, value);
  else if (key == "cu_tx_power") c.cu_tx_power = to_double(key, value);
  else if (key == "iterations") c.iterations = to_int(key, value);
  else if (key == "seed") {
    const long long v = to_integer(key, value);
    if (v < 0) throw ConfigError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(v);
  }
  else if (key == "table_dir") {
    if (value.empty() || value == "none") c.table_dir.reset();
    else c.table_dir = std::filesystem::path(std::string(value));
  }
  else if (key == "table_method") c.table_method = parse_table_method(value);
  else if (key == "table_fft_size") c.table_fft_size = to_int(key, value);
  else if (key == "table_span") c.table_span = to_int(key, value);
  else if (key == "table_offsets") c.table_offsets = to_int(key, value);
  else if (key == "table_symbol_draws") c.table_symbol_draws = to_int(key, value);
  else if (key == "table_seed") {
    const long long v = to_integer(key, value);
    if (v < 0) throw ConfigError("table_seed must be nonnegative");
    c.table_seed = static_cast<std::uint64_t>(v);
  }
  else if (key == "cp_ratio") c.cp_ratio = to_double(key, value);
  else if (key == "freq_offset_max") c.freq_offset_max = to_double(key, value);
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, const std::string& source) {
  ScenarioConfig config;
  int line_no = 0;
  std::size_t pos = 0;
  std::vector<std::string> seen;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    std::string_view line = raw;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(source, line_no, 1, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const int key_col = static_cast<int>(key.data() - raw.data()) + 1;
    const int value_col = value.empty() ? static_cast<int>(eq) + 2 : static_cast<int>(value.data() - raw.data()) + 1;
    if (key.empty()) throw ParseError(source, line_no, 1, "missing key before '='");
    for (const auto& k : seen)
      if (k == key) throw ParseError(source, line_no, key_col, "duplicate key '" + std::string(key) + "'");
    seen.emplace_back(key);
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      const bool unknown = std::string_view(e.what()).starts_with("unknown key");
      throw ParseError(source, line_no, unknown ? key_col : value_col, e.what());
    }
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  ScenarioConfig c = parse_config(read_file(path), path.string());
  if (c.table_dir && c.table_dir->is_relative()) c.table_dir = path.parent_path() / *c.table_dir;
  return c;
}

std::string format_config(const ScenarioConfig& c) {
  std::string out;
  auto put = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
  put("cell_radius", num(c.cell_radius));
  put("carrier_freq", num(c.carrier_freq));
  put("subcarrier_spacing", num(c.subcarrier_spacing));
  put("num_rbs", std::to_string(c.num_rbs));
  put("subcarriers_per_rb", std::to_string(c.subcarriers_per_rb));
  put("num_cus", std::to_string(c.num_cus));
  put("num_d2d_pairs", std::to_string(c.num_d2d_pairs));
  put("layout", to_string(c.layout));
  put("cluster_radius_min", num(c.cluster_radius_min));
  put("cluster_radius_max", num(c.cluster_radius_max));
  put("cluster_radius_fixed", c.cluster_radius_fixed ? num(*c.cluster_radius_fixed) : "none");
  put("cluster_distance_fixed", c.cluster_distance_fixed ? num(*c.cluster_distance_fixed) : "none");
  put("d2d_max_link_factor", num(c.d2d_max_link_factor));
  put("cu_min_sinr", num(c.cu_min_sinr));
  put("noise_per_subcarrier", num(c.noise_per_subcarrier));
  put("max_tx_power", num(c.max_tx_power));
  put("cu_tx_power", num(c.cu_tx_power));
  put("iterations", std::to_string(c.iterations));
  put("seed", std::to_string(c.seed));
  put("table_dir", c.table_dir ? c.table_dir->string() : "none");
  put("table_method", to_string(c.table_method));
  put("table_fft_size", std::to_string(c.table_fft_size));
  put("table_span", std::to_string(c.table_span));
  put("table_offsets", std::to_string(c.table_offsets));
  put("table_symbol_draws", std::to_string(c.table_symbol_draws));
  put("table_seed", std::to_string(c.table_seed));
  put("cp_ratio", num(c.cp_ratio));
  put("freq_offset_max", num(c.freq_offset_max));
  return out;
}

TableSet tables_for(const ScenarioConfig& config) {
  if (config.table_dir) return load_table_set(*config.table_dir);
  return generate_table_set(config.table_options());
}

}  // namespace d2dcoex
