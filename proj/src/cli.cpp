#include "d2dcoex/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "d2dcoex/config.hpp"
#include "d2dcoex/errors.hpp"
#include "d2dcoex/io.hpp"
#include "d2dcoex/report_io.hpp"
#include "d2dcoex/simulation.hpp"
#include "d2dcoex/waveform.hpp"

namespace d2dcoex::cli {
namespace {

namespace fs = std::filesystem;

struct TablesArgs {
  std::string pair = "all";
  std::string method = "time";
  int span = kDefaultHalfSpan;
  int offsets = 1000;
  int draws = 1000;
  std::uint64_t seed = 1;
  int fft = 256;
  double cp = kDefaultCpRatio;
  double freq_offset = 0.0;
  std::string out;
};

struct CampaignArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  int jobs = 0;
  std::vector<std::string> set;
};

struct SweepArgs {
  CampaignArgs campaign;
  std::string param;
  std::vector<double> values;
};

struct ValidateArgs {
  std::string config;
  std::string tables;
};

struct Cli {
  CLI::App app{"System-level simulator for D2D underlay with OFDM and FBMC/OQAM links", "d2dcoex"};
  TablesArgs tables;
  SweepArgs sweep;
  CampaignArgs run;
  ValidateArgs validate;
  CLI::App* tables_cmd = nullptr;
  CLI::App* run_cmd = nullptr;
  CLI::App* sweep_cmd = nullptr;
  CLI::App* validate_cmd = nullptr;

  Cli() {
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 runtime failure, 2 usage, 3 unreadable input, 4 invariant violation.\n"
               "--out defaults to $D2DCOEX_OUT, then the current directory.");

    tables_cmd = app.add_subcommand("tables", "Generate interference tables");
    tables_cmd->add_option("--pair", tables.pair, "interferer:victim (ofdm, ofdm@<cp>, fbmc) or 'all'")
        ->capture_default_str();
    tables_cmd->add_option("--method", tables.method, "time or psd")->capture_default_str()
        ->check(CLI::IsMember({"time", "psd"}));
    tables_cmd->add_option("--span", tables.span, "half span L of the table")->capture_default_str()
        ->check(CLI::PositiveNumber);
    tables_cmd->add_option("--offsets", tables.offsets, "timing offsets (time method)")->capture_default_str()
        ->check(CLI::Range(100, 1000000));
    tables_cmd->add_option("--draws", tables.draws, "symbol draws per offset (time method)")->capture_default_str()
        ->check(CLI::PositiveNumber);
    tables_cmd->add_option("--seed", tables.seed, "RNG seed")->capture_default_str();
    tables_cmd->add_option("--fft", tables.fft, "FFT size")->capture_default_str();
    tables_cmd->add_option("--cp", tables.cp, "OFDM cyclic prefix ratio")->capture_default_str();
    tables_cmd->add_option("--freq-offset", tables.freq_offset, "max carrier offset in subcarrier spacings")
        ->capture_default_str();
    tables_cmd->add_option("--out", tables.out, "output file (one pair) or directory (all)");

    run_cmd = app.add_subcommand("run", "Run a Monte Carlo campaign");
    add_campaign_options(run_cmd, run);

    sweep_cmd = app.add_subcommand("sweep", "Run one campaign per parameter value");
    add_campaign_options(sweep_cmd, sweep.campaign);
    sweep_cmd->add_option("--param", sweep.param, "num_pairs, cluster_radius or cluster_distance")->required()
        ->check(CLI::IsMember({"num_pairs", "cluster_radius", "cluster_distance"}));
    sweep_cmd->add_option("--values", sweep.values, "comma-separated parameter values")->required()->delimiter(',');

    validate_cmd = app.add_subcommand("validate", "Check a config and its tables without running");
    validate_cmd->add_option("--config", validate.config, "scenario config file")->required();
    validate_cmd->add_option("--tables", validate.tables, "table directory (overrides table_dir)");
  }

  static void add_campaign_options(CLI::App* cmd, CampaignArgs& a) {
    cmd->add_option("--config", a.config, "scenario config file (default: built-in parameter set)");
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--seed", a.seed, "master seed override");
    cmd->add_option("--iterations", a.iterations, "iteration count override")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", a.jobs, "worker threads (0 = all cores)")->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--set", a.set, "key=value config override (repeatable)");
  }
};

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

void report(const Failure& f) {
  std::string msg = f.message;
  for (char& c : msg)
    if (c == '\n' || c == '\r') c = ' ';
  std::cerr << "error code=" << f.code << " kind=" << f.kind << " message=" << msg << std::endl;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return ".";
}

ScenarioConfig campaign_config(const CampaignArgs& a) {
  ScenarioConfig c = a.config.empty() ? ScenarioConfig{} : load_config(a.config);
  for (const auto& kv : a.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed) c.seed = *a.seed;
  if (a.iterations) c.iterations = *a.iterations;
  c.validate();
  return c;
}

int do_tables(const TablesArgs& a) {
  TableSetOptions o;
  o.method = parse_table_method(a.method);
  o.fft_size = a.fft;
  o.half_span = a.span;
  o.cp_ratio = a.cp;
  o.time_sim.num_offsets = a.offsets;
  o.time_sim.symbol_draws = a.draws;
  o.time_sim.seed = a.seed;
  o.time_sim.max_freq_offset = a.freq_offset;
  const fs::path out = output_dir(a.out);

  if (a.pair == "all") {
    save_table_set(generate_table_set(o), out);
    return kOk;
  }
  const auto colon = a.pair.find(':');
  if (colon == std::string::npos) throw UsageError("--pair expects interferer:victim or 'all', got '" + a.pair + "'");
  WaveformKind tx, rx;
  try {
    tx = parse_waveform_kind(a.pair.substr(0, colon));
    rx = parse_waveform_kind(a.pair.substr(colon + 1));
  } catch (const Error& e) {
    throw UsageError(std::string("--pair: ") + e.what());
  }
  if (tx.kind == Waveform::Ofdm && a.pair.substr(0, colon).find('@') == std::string::npos) tx.cp_ratio = a.cp;
  if (rx.kind == Waveform::Ofdm && a.pair.substr(colon + 1).find('@') == std::string::npos) rx.cp_ratio = a.cp;
  const PrototypeFilter filter = build_phydyas_filter(4, a.fft);
  const InterferenceTable t = o.method == TableMethod::Psd
                                  ? table_from_psd(tx, rx, filter, a.span)
                                  : table_from_time_sim(tx, rx, filter, a.span, o.time_sim);
  fs::path target = out;
  if (a.out.empty() || fs::is_directory(out) || a.out.back() == '/') {
    fs::create_directories(out);
    target = out / table_file_name(tx.kind, rx.kind);
  } else if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  save_table(t, target);
  std::cout << target.string() << '\n';
  return kOk;
}

int do_run(const CampaignArgs& a) {
  const ScenarioConfig c = campaign_config(a);
  const TableSet tables = tables_for(c);
  const RateReport r = run_campaign(c, tables, {a.jobs});
  const fs::path out = output_dir(a.out);
  write_run_outputs(out, r);
  for (D2dCase cs : kCases) {
    const CaseReport& cr = r.of(cs);
    std::cout << to_string(cs) << ": mean predicted " << format_sig9(cr.predicted_summary.mean)
              << " bit/s, mean actual " << format_sig9(cr.actual_summary.mean) << " bit/s, median gap "
              << format_sig9(cr.median_relative_gap) << '\n';
  }
  std::cout << "iterations " << r.iterations << ", skipped " << r.skipped << ", outputs in " << out.string() << '\n';
  return kOk;
}

int do_sweep(const SweepArgs& a) {
  const ScenarioConfig c = campaign_config(a.campaign);
  const SweepParameter p = parse_sweep_parameter(a.param);
  const TableSet tables = tables_for(c);
  const SweepResult r = sweep(c, tables, p, a.values, {a.campaign.jobs});
  const fs::path out = output_dir(a.campaign.out);
  write_sweep_outputs(out, r);
  std::cout << sweep_csv(r);
  return kOk;
}

int do_validate(const ValidateArgs& a) {
  ScenarioConfig c = load_config(a.config);
  c.validate();
  if (!a.tables.empty()) c.table_dir = fs::path(a.tables);
  if (c.table_dir) {
    const TableSet t = load_table_set(*c.table_dir);
    for (const InterferenceTable* table : {&t.ofdm_ofdm, &t.ofdm_fbmc, &t.fbmc_ofdm, &t.fbmc_fbmc})
      if (table->interferer().kind == Waveform::Ofdm && table->interferer().cp_ratio != c.cp_ratio)
        throw ValidationError("table " + to_string(table->interferer()) + "->" + to_string(table->victim()) +
                              " was generated with a different cp_ratio than the config");
    std::cout << "ok: config and tables in " << c.table_dir->string() << '\n';
  } else {
    std::cout << "ok: config (tables will be generated)\n";
  }
  return kOk;
}

}  // namespace

std::string help_text() {
  Cli cli;
  return cli.app.help("", CLI::AppFormatMode::All);
}

int parse_and_dispatch(int argc, const char* const* argv) {
  Cli cli;
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (cli.app.get_subcommands().empty()) {
      std::cout << cli.app.help("", CLI::AppFormatMode::All);
    } else {
      std::cout << cli.app.get_subcommands().front()->help();
    }
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << cli.app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report({kUsage, "usage", e.what()});
    return kUsage;
  }

  try {
    if (*cli.tables_cmd) return do_tables(cli.tables);
    if (*cli.run_cmd) return do_run(cli.run);
    if (*cli.sweep_cmd) return do_sweep(cli.sweep);
    if (*cli.validate_cmd) return do_validate(cli.validate);
  } catch (const UsageError& e) {
    report({kUsage, "usage", e.what()});
    return kUsage;
  } catch (const ParseError& e) {
    report({kUnreadableInput, "parse", e.what()});
    return kUnreadableInput;
  } catch (const ConfigError& e) {
    report({kInvariant, "config", e.what()});
    return kInvariant;
  } catch (const UnsupportedParameter& e) {
    report({kInvariant, "unsupported", e.what()});
    return kInvariant;
  } catch (const ValidationError& e) {
    report({kInvariant, "validation", e.what()});
    return kInvariant;
  } catch (const UnreadableFile& e) {
    report({kUnreadableInput, "unreadable", e.what()});
    return kUnreadableInput;
  } catch (const EmptyReport& e) {
    report({kFailure, "empty_report", e.what()});
    return kFailure;
  } catch (const std::exception& e) {
    report({kFailure, "runtime", e.what()});
    return kFailure;
  }
  return kUsage;
}

}  // namespace d2dcoex::cli
