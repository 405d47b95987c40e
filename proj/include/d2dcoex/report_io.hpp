#pragma once

#include <filesystem>
#include <string>

#include "d2dcoex/simulation.hpp"

namespace d2dcoex {

// CSV renderings of campaign results; numbers use 9 significant digits.

/// iteration,case,rate_predicted,rate_actual,feasible,cluster_radius,cluster_distance,num_pairs,solver_status
std::string samples_csv(const RateReport& report);

/// rate,ofdm_predicted,ofdm_actual,fbmc_predicted,fbmc_actual
std::string cdf_csv(const RateReport& report);

/// One row per case: mean, median, 5th/95th percentiles, median relative gap, counts.
std::string summary_csv(const RateReport& report);

/// One row per sweep point with per-case mean predicted and actual rates.
std::string sweep_csv(const SweepResult& result);

/// samples_csv rows of every sweep point prefixed with the parameter value.
std::string sweep_samples_csv(const SweepResult& result);

std::string run_plot_script();
std::string sweep_plot_script(SweepParameter parameter);

/// samples.csv, cdf.csv, summary.csv and plot.gp, all-or-nothing.
void write_run_outputs(const std::filesystem::path& dir, const RateReport& report);

/// sweep.csv, sweep_samples.csv and plot.gp, all-or-nothing.
void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result);

}  // namespace d2dcoex
