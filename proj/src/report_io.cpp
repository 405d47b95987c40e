#include "d2dcoex/report_io.hpp"

#include <sstream>

#include "d2dcoex/io.hpp"

namespace d2dcoex {
namespace {

constexpr const char* kSamplesHeader =
    "iteration,case,rate_predicted,rate_actual,feasible,cluster_radius,cluster_distance,num_pairs,solver_status\n";

void sample_rows(std::ostringstream& out, const RateReport& report, const std::string& prefix) {
  for (const auto& r : report.samples) {
    out << prefix << r.iteration << ',' << to_string(r.d2d_case) << ',' << format_sig9(r.rate_predicted) << ','
        << format_sig9(r.rate_actual) << ',' << (r.feasible ? 1 : 0) << ',' << format_sig9(r.cluster_radius) << ','
        << format_sig9(r.cluster_distance) << ',' << r.num_pairs << ',' << to_string(r.status) << '\n';
  }
}

}  // namespace

std::string samples_csv(const RateReport& report) {
  std::ostringstream out;
  out << kSamplesHeader;
  sample_rows(out, report, "");
  return out.str();
}

std::string cdf_csv(const RateReport& report) {
  std::ostringstream out;
  out << "rate,ofdm_predicted,ofdm_actual,fbmc_predicted,fbmc_actual\n";
  for (std::size_t g = 0; g < report.cdf.grid.size(); ++g) {
    out << format_sig9(report.cdf.grid[g]);
    for (const auto& col : report.cdf.columns) out << ',' << format_sig9(col[g]);
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const RateReport& report) {
  std::ostringstream out;
  out << "case,variant,mean,median,p5,p95,median_relative_gap,samples,skipped,non_optimal_solves\n";
  for (D2dCase c : kCases) {
    const CaseReport& cr = report.of(c);
    for (int v = 0; v < 2; ++v) {
      const Summary& s = v == 0 ? cr.predicted_summary : cr.actual_summary;
      out << to_string(c) << ',' << (v == 0 ? "predicted" : "actual") << ',' << format_sig9(s.mean) << ','
          << format_sig9(s.median) << ',' << format_sig9(s.p5) << ',' << format_sig9(s.p95) << ','
          << format_sig9(cr.median_relative_gap) << ',' << cr.actual.size() << ',' << report.skipped << ','
          << cr.non_optimal_solves << '\n';
    }
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << to_string(result.parameter)
      << ",ofdm_predicted_mean,ofdm_actual_mean,fbmc_predicted_mean,fbmc_actual_mean,"
         "ofdm_median_gap,fbmc_median_gap,skipped\n";
  for (std::size_t p = 0; p < result.values.size(); ++p) {
    const RateReport& r = result.reports[p];
    out << format_sig9(result.values[p]);
    for (D2dCase c : kCases)
      out << ',' << format_sig9(r.of(c).predicted_summary.mean) << ',' << format_sig9(r.of(c).actual_summary.mean);
    for (D2dCase c : kCases) out << ',' << format_sig9(r.of(c).median_relative_gap);
    out << ',' << r.skipped << '\n';
  }
  return out.str();
}

std::string sweep_samples_csv(const SweepResult& result) {
  std::ostringstream out;
  out << to_string(result.parameter) << ',' << kSamplesHeader;
  for (std::size_t p = 0; p < result.values.size(); ++p)
    sample_rows(out, result.reports[p], format_sig9(result.values[p]) + ",");
  return out.str();
}

std::string run_plot_script() {
  return R"(set datafile separator ','
set key autotitle columnhead bottom right
set xlabel 'Average rate per D2D pair (bit/s)'
set ylabel 'CDF'
set yrange [0:1]
set terminal pngcairo size 900,600
set output 'cdf.png'
plot 'cdf.csv' using 1:2 with lines lw 2, \
     '' using 1:3 with lines lw 2, \
     '' using 1:4 with lines lw 2 dt 2, \
     '' using 1:5 with lines lw 2 dt 2
)";
}

std::string sweep_plot_script(SweepParameter parameter) {
  std::string xlabel;
  switch (parameter) {
    case SweepParameter::NumPairs: xlabel = "Number of D2D pairs"; break;
    case SweepParameter::ClusterRadius: xlabel = "Cluster radius (m)"; break;
    case SweepParameter::ClusterDistance: xlabel = "Cluster distance from BS (m)"; break;
  }
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel '" + xlabel + "'\n"
         "set ylabel 'Average rate per D2D pair (bit/s)'\n"
         "set terminal pngcairo size 900,600\n"
         "set output 'sweep.png'\n"
         "plot 'sweep.csv' using 1:2 with linespoints lw 2, \\\n"
         "     '' using 1:3 with linespoints lw 2, \\\n"
         "     '' using 1:4 with linespoints lw 2 dt 2, \\\n"
         "     '' using 1:5 with linespoints lw 2 dt 2\n";
}

void write_run_outputs(const std::filesystem::path& dir, const RateReport& report) {
  std::filesystem::create_directories(dir);
  OutputBatch batch;
  batch.add(dir / "samples.csv", samples_csv(report));
  batch.add(dir / "cdf.csv", cdf_csv(report));
  batch.add(dir / "summary.csv", summary_csv(report));
  batch.add(dir / "plot.gp", run_plot_script());
  batch.commit();
}

void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& result) {
  std::filesystem::create_directories(dir);
  OutputBatch batch;
  batch.add(dir / "sweep.csv", sweep_csv(result));
  batch.add(dir / "sweep_samples.csv", sweep_samples_csv(result));
  batch.add(dir / "plot.gp", sweep_plot_script(result.parameter));
  batch.commit();
}

}  // namespace d2dcoex
