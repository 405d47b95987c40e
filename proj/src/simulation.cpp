#include "d2dcoex/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "d2dcoex/channel.hpp"
#include "d2dcoex/errors.hpp"
#include "d2dcoex/geometry.hpp"
#include "d2dcoex/interference.hpp"
#include "d2dcoex/rng.hpp"

namespace d2dcoex {

std::string to_string(D2dCase c) { return c == D2dCase::Ofdm ? "ofdm" : "fbmc"; }

Waveform waveform_of(D2dCase c) { return c == D2dCase::Ofdm ? Waveform::Ofdm : Waveform::FbmcOqam; }

double rate_from_sinr(double sinr_linear, double subcarrier_spacing) {
  if (!(sinr_linear >= 0.0)) throw DomainError("SINR must be nonnegative");
  return subcarrier_spacing * std::log2(1.0 + sinr_linear);
}

std::array<IterationResult, 2> run_iteration(const ScenarioConfig& config, const TableSet& tables,
                                             std::uint64_t seed, int iteration) {
  const auto it = static_cast<std::uint64_t>(iteration);
  Rng geo_rng(derive_seed(seed, it, 0));
  Rng channel_rng(derive_seed(seed, it, 1));
  Rng map_rng(derive_seed(seed, it, 2));
  const NodePlacement placement = sample_placement(config, geo_rng);
  const ChannelGains gains = gains_from_placement(placement, config, channel_rng);
  const SpectrumMap cu_map = SpectrumMap::random(config.num_rbs, config.subcarriers_per_rb, map_rng);

  const Eigen::VectorXd p_cu = Eigen::VectorXd::Constant(config.num_cus, config.cu_tx_power_w());
  const double noise = config.noise_per_subcarrier_w();
  const double pmax = config.max_tx_power_w();
  const double sinr_min = config.cu_min_sinr_linear();
  const int pairs = config.num_d2d_pairs;
  const int s = config.subcarriers_per_rb;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::array<IterationResult, 2> out;
  for (D2dCase c : kCases) {
    IterationResult& r = out[static_cast<std::size_t>(c)];
    r.iteration = iteration;
    r.d2d_case = c;
    r.num_pairs = pairs;
    r.cluster_radius = placement.cluster_radius.value_or(nan);
    r.cluster_distance = placement.cluster_centre ? distance(placement.bs_pos, *placement.cluster_centre) : nan;

    const Waveform wf = waveform_of(c);
    const SinrInputs unassigned = make_sinr_inputs(gains, cu_map, tables, wf, noise);
    const Assignment assignment = hungarian(cu_to_d2d_cost_matrix(unassigned, p_cu));
    SpectrumMap map = cu_map;
    map.rb_of_d2d = assignment.rb_of_pair;
    const SinrInputs in = make_sinr_inputs(gains, map, tables, wf, noise);
    const PowerLoadingResult sol = power_loading(in, p_cu, pmax, sinr_min);
    r.status = sol.status;
    if (sol.status == SolveStatus::InfeasibleSkipped) {
      r.feasible = false;
      continue;
    }
    const PowerAllocation alloc{sol.powers, p_cu};
    double predicted = 0.0, actual = 0.0;
    for (int j = 0; j < pairs; ++j)
      for (int m = 0; m < s; ++m) {
        predicted += rate_from_sinr(d2d_sinr_predicted(in, alloc, j, m), config.subcarrier_spacing);
        actual += rate_from_sinr(d2d_sinr_actual(in, alloc, j, m), config.subcarrier_spacing);
      }
    r.rate_predicted = predicted / pairs;
    r.rate_actual = actual / pairs;
  }
  // Feasibility depends only on the CU side, which both cases share.
  if (!out[0].feasible || !out[1].feasible) out[0].feasible = out[1].feasible = false;
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw EmptyReport("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = quantile_sorted(values, 0.5);
  s.p5 = quantile_sorted(values, 0.05);
  s.p95 = quantile_sorted(values, 0.95);
  return s;
}

namespace {

std::vector<double> empirical_cdf(const std::vector<double>& sorted, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto n = std::upper_bound(sorted.begin(), sorted.end(), grid[g]) - sorted.begin();
    out[g] = static_cast<double>(n) / static_cast<double>(sorted.size());
  }
  return out;
}

RateReport aggregate(std::vector<IterationResult> samples, int iterations) {
  RateReport rep;
  rep.iterations = iterations;
  for (const auto& r : samples) {
    if (!r.feasible) {
      if (r.d2d_case == D2dCase::Ofdm) ++rep.skipped;
      continue;
    }
    CaseReport& c = rep.cases[static_cast<std::size_t>(r.d2d_case)];
    c.predicted.push_back(r.rate_predicted);
    c.actual.push_back(r.rate_actual);
    c.relative_gap.push_back(r.rate_predicted > 0.0 ? (r.rate_predicted - r.rate_actual) / r.rate_predicted : 0.0);
    if (r.status != SolveStatus::Optimal) ++c.non_optimal_solves;
  }
  rep.samples = std::move(samples);
  if (rep.skipped == iterations) throw EmptyReport("all " + std::to_string(iterations) + " iterations were infeasible");

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (CaseReport& c : rep.cases) {
    std::sort(c.predicted.begin(), c.predicted.end());
    std::sort(c.actual.begin(), c.actual.end());
    std::sort(c.relative_gap.begin(), c.relative_gap.end());
    c.predicted_summary = summarize(c.predicted);
    c.actual_summary = summarize(c.actual);
    c.median_relative_gap = quantile_sorted(c.relative_gap, 0.5);
    lo = std::min({lo, c.predicted.front(), c.actual.front()});
    hi = std::max({hi, c.predicted.back(), c.actual.back()});
  }
  rep.cdf.grid.resize(kCdfPoints);
  for (int g = 0; g < kCdfPoints; ++g)
    rep.cdf.grid[static_cast<std::size_t>(g)] = g + 1 == kCdfPoints ? hi : lo + (hi - lo) * g / (kCdfPoints - 1);
  for (std::size_t c = 0; c < 2; ++c) {
    rep.cdf.columns[2 * c] = empirical_cdf(rep.cases[c].predicted, rep.cdf.grid);
    rep.cdf.columns[2 * c + 1] = empirical_cdf(rep.cases[c].actual, rep.cdf.grid);
  }
  return rep;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

RateReport run_campaign(const ScenarioConfig& config, const TableSet& tables, const RunOptions& options) {
  config.validate();
  const int n = config.iterations;
  std::vector<IterationResult> samples(static_cast<std::size_t>(2 * n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        const auto pair = run_iteration(config, tables, config.seed, i);
        samples[static_cast<std::size_t>(2 * i)] = pair[0];
        samples[static_cast<std::size_t>(2 * i + 1)] = pair[1];
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  const int jobs = std::min(resolve_jobs(options.jobs), n);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(std::move(samples), n);
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::NumPairs: return "num_pairs";
    case SweepParameter::ClusterRadius: return "cluster_radius";
    case SweepParameter::ClusterDistance: return "cluster_distance";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(const std::string& text) {
  if (text == "num_pairs" || text == "num_d2d_pairs") return SweepParameter::NumPairs;
  if (text == "cluster_radius") return SweepParameter::ClusterRadius;
  if (text == "cluster_distance") return SweepParameter::ClusterDistance;
  throw ConfigError("unknown sweep parameter '" + text + "' (expected num_pairs, cluster_radius or cluster_distance)");
}

ScenarioConfig sweep_point_config(const ScenarioConfig& base, SweepParameter parameter, double value, int point) {
  ScenarioConfig c = base;
  c.seed = base.seed + static_cast<std::uint64_t>(point);
  switch (parameter) {
    case SweepParameter::NumPairs:
      if (value != std::floor(value)) throw ConfigError("num_pairs=" + std::to_string(value) + ": not an integer");
      c.num_d2d_pairs = static_cast<int>(value);
      break;
    case SweepParameter::ClusterRadius:
      c.cluster_radius_fixed = value;
      break;
    case SweepParameter::ClusterDistance:
      c.cluster_distance_fixed = value;
      break;
  }
  if (parameter != SweepParameter::NumPairs && c.layout != Layout::Clustered)
    throw ConfigError(to_string(parameter) + " sweep needs layout = clustered");
  try {
    c.validate();
  } catch (const ConfigError& e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    throw ConfigError(to_string(parameter) + "=" + buf + ": " + e.what());
  }
  return c;
}

SweepResult sweep(const ScenarioConfig& config, const TableSet& tables, SweepParameter parameter,
                  const std::vector<double>& values, const RunOptions& options) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult out;
  out.parameter = parameter;
  out.values = values;
  std::vector<ScenarioConfig> points;
  for (std::size_t p = 0; p < values.size(); ++p)
    points.push_back(sweep_point_config(config, parameter, values[p], static_cast<int>(p)));
  for (const auto& c : points) out.reports.push_back(run_campaign(c, tables, options));
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("Spearman needs two equal-length samples of size >= 2");
  return pearson(average_ranks(x), average_ranks(y));
}

double spearman_p_greater(const std::vector<double>& x, const std::vector<double>& y) {
  const double rho = spearman_rho(x, y);
  const std::size_t n = x.size();
  if (n <= 8) {
    const std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    std::sort(ry.begin(), ry.end());
    long total = 0, extreme = 0;
    do {
      ++total;
      if (pearson(rx, ry) >= rho - 1e-12) ++extreme;
    } while (std::next_permutation(ry.begin(), ry.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
  }
  const double z = rho * std::sqrt(static_cast<double>(n - 1));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace d2dcoex
