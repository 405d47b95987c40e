#pragma once

// Monte Carlo campaign: per-iteration snapshot, RB assignment and power
// loading for the two D2D waveform cases, and aggregation into rate reports.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "d2dcoex/allocation.hpp"
#include "d2dcoex/config.hpp"
#include "d2dcoex/waveform.hpp"

namespace d2dcoex {

enum class D2dCase { Ofdm, Fbmc };

inline constexpr std::array<D2dCase, 2> kCases{D2dCase::Ofdm, D2dCase::Fbmc};

std::string to_string(D2dCase c);
Waveform waveform_of(D2dCase c);

struct IterationResult {
  int iteration = 0;
  D2dCase d2d_case = D2dCase::Ofdm;
  double rate_predicted = 0.0;  ///< bit/s per pair, inter-D2D interference ignored
  double rate_actual = 0.0;     ///< bit/s per pair
  bool feasible = true;
  SolveStatus status = SolveStatus::Optimal;
  double cluster_radius = 0.0;    ///< m, NaN without clusters
  double cluster_distance = 0.0;  ///< m, NaN without clusters
  int num_pairs = 0;
};

/// subcarrier_spacing * log2(1 + sinr).
double rate_from_sinr(double sinr_linear, double subcarrier_spacing);

/// Both cases on one snapshot. The snapshot is drawn from substreams of
/// (seed, iteration) only, so results do not depend on scheduling.
std::array<IterationResult, 2> run_iteration(const ScenarioConfig& config, const TableSet& tables,
                                             std::uint64_t seed, int iteration);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
};

/// Linear-interpolated quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);
Summary summarize(std::vector<double> values);

struct CaseReport {
  std::vector<double> predicted;  ///< sorted
  std::vector<double> actual;     ///< sorted
  std::vector<double> relative_gap;  ///< (predicted - actual) / predicted per iteration, sorted
  Summary predicted_summary;
  Summary actual_summary;
  double median_relative_gap = 0.0;
  int non_optimal_solves = 0;
};

struct Cdf {
  std::vector<double> grid;
  /// Columns in kCases order: predicted then actual for each case.
  std::array<std::vector<double>, 4> columns;
};

inline constexpr int kCdfPoints = 200;

struct RateReport {
  std::vector<IterationResult> samples;  ///< iteration-major, kCases order
  std::array<CaseReport, 2> cases;
  Cdf cdf;
  int iterations = 0;
  int skipped = 0;

  const CaseReport& of(D2dCase c) const { return cases[static_cast<std::size_t>(c)]; }
};

struct RunOptions {
  int jobs = 0;  ///< worker threads; 0 = hardware concurrency
};

/// Aggregates config.iterations iterations seeded from config.seed.
/// Throws EmptyReport when every iteration is infeasible.
RateReport run_campaign(const ScenarioConfig& config, const TableSet& tables, const RunOptions& options = {});

enum class SweepParameter { NumPairs, ClusterRadius, ClusterDistance };

std::string to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& text);

/// Config for one sweep point; point p is seeded with config.seed + p.
/// Throws ConfigError naming the offending value.
ScenarioConfig sweep_point_config(const ScenarioConfig& base, SweepParameter parameter, double value, int point);

struct SweepResult {
  SweepParameter parameter = SweepParameter::NumPairs;
  std::vector<double> values;
  std::vector<RateReport> reports;
};

SweepResult sweep(const ScenarioConfig& config, const TableSet& tables, SweepParameter parameter,
                  const std::vector<double>& values, const RunOptions& options = {});

/// Spearman rank correlation with average ranks for ties.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

/// One-sided p-value for H1: rho > 0 (use -rho for a decreasing trend).
/// Exact permutation distribution for n <= 8, otherwise the normal
/// approximation rho * sqrt(n - 1).
double spearman_p_greater(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace d2dcoex
