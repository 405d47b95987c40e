#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "d2dcoex/allocation.hpp"
#include "d2dcoex/channel.hpp"
#include "d2dcoex/config.hpp"
#include "d2dcoex/errors.hpp"
#include "d2dcoex/simulation.hpp"
#include "d2dcoex/waveform.hpp"

namespace py = pybind11;
using namespace d2dcoex;

namespace {

InterferenceTable make_table(const std::string& interferer, const std::string& victim, const std::string& method,
                             int span, int fft_size, int offsets, int draws, std::uint64_t seed) {
  const PrototypeFilter f = build_phydyas_filter(4, fft_size);
  const WaveformKind a = parse_waveform_kind(interferer), b = parse_waveform_kind(victim);
  if (parse_table_method(method) == TableMethod::Psd) return table_from_psd(a, b, f, span);
  TimeSimOptions o;
  o.num_offsets = offsets;
  o.symbol_draws = draws;
  o.seed = seed;
  return table_from_time_sim(a, b, f, span, o);
}

py::dict case_dict(const CaseReport& c) {
  py::dict d;
  d["predicted"] = c.predicted;
  d["actual"] = c.actual;
  d["mean_predicted"] = c.predicted_summary.mean;
  d["mean_actual"] = c.actual_summary.mean;
  d["median_relative_gap"] = c.median_relative_gap;
  d["non_optimal_solves"] = c.non_optimal_solves;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "D2D underlay coexistence simulator";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InfeasibleAssignment>(m, "InfeasibleAssignment", base.ptr());
  py::register_exception<EmptyReport>(m, "EmptyReport", base.ptr());
  py::register_exception<UnreadableFile>(m, "UnreadableFile", base.ptr());

  m.def("phydyas_filter", [](int fft_size) {
        const auto f = build_phydyas_filter(4, fft_size);
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.impulse_response.data(),
                                                                 static_cast<Eigen::Index>(f.impulse_response.size())));
      },
      py::arg("fft_size") = 256, "Unit-energy PHYDYAS prototype (overlap 4).");

  py::class_<InterferenceTable>(m, "InterferenceTable")
      .def_property_readonly("interferer", [](const InterferenceTable& t) { return to_string(t.interferer()); })
      .def_property_readonly("victim", [](const InterferenceTable& t) { return to_string(t.victim()); })
      .def_property_readonly("method", [](const InterferenceTable& t) { return to_string(t.method()); })
      .def_property_readonly("half_span", &InterferenceTable::half_span)
      .def_property_readonly("reference_power", &InterferenceTable::reference_power)
      .def_property_readonly("coeffs", &InterferenceTable::coeffs)
      .def("__call__", &InterferenceTable::operator())
      .def("tail_sum", &InterferenceTable::tail_sum)
      .def("to_csv", &format_table)
      .def_static("from_csv", [](const std::string& text) { return parse_table(text); });

  m.def("table_from_psd",
        [](const std::string& a, const std::string& b, int span, int fft) {
          return make_table(a, b, "psd", span, fft, 0, 0, 0);
        },
        py::arg("interferer"), py::arg("victim"), py::arg("span") = kDefaultHalfSpan, py::arg("fft_size") = 256);
  m.def("table_from_time_sim", &make_table, py::arg("interferer"), py::arg("victim"), py::arg("method") = "time",
        py::arg("span") = kDefaultHalfSpan, py::arg("fft_size") = 256, py::arg("offsets") = 1000,
        py::arg("draws") = 1000, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<TableSet>(m, "TableSet")
      .def("get", [](const TableSet& t, const std::string& a, const std::string& b) {
        return t.get(parse_waveform_kind(a).kind, parse_waveform_kind(b).kind);
      });
  m.def("load_tables", &load_table_set, py::arg("directory"));

  py::class_<ScenarioConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("num_d2d_pairs", &ScenarioConfig::num_d2d_pairs)
      .def_readwrite("iterations", &ScenarioConfig::iterations)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("cluster_radius_fixed", &ScenarioConfig::cluster_radius_fixed)
      .def_readwrite("cluster_distance_fixed", &ScenarioConfig::cluster_distance_fixed)
      .def("set", [](ScenarioConfig& c, const std::string& key, const std::string& value) {
        set_config_value(c, key, value);
      })
      .def("validate", &ScenarioConfig::validate)
      .def("__str__", &format_config);
  m.def("load_config", &load_config, py::arg("path"));
  m.def("generate_tables", &tables_for, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def("los_probability", &los_probability, py::arg("distance"));
  m.def("pathloss_db", &pathloss_db, py::arg("distance"), py::arg("carrier_freq"), py::arg("los"));
  m.def("rate_from_sinr", &rate_from_sinr, py::arg("sinr"), py::arg("subcarrier_spacing") = 15e3);

  m.def("hungarian", [](const Eigen::MatrixXd& cost) { return hungarian(cost).rb_of_pair; }, py::arg("cost"));

  m.def("solve_power_loading",
        [](const Eigen::MatrixXd& g, const Eigen::MatrixXd& c, const Eigen::VectorXd& t, double pmax) {
          const PowerLoadingResult r = solve_power_loading({g, c, t, pmax});
          py::dict d;
          d["powers"] = r.powers;
          d["dual_cu"] = r.dual_cu;
          d["dual_cap"] = r.dual_cap;
          d["objective"] = r.objective;
          d["kkt_residual"] = r.kkt_residual;
          d["iterations"] = r.iterations_used;
          d["status"] = to_string(r.status);
          return d;
        },
        py::arg("gain_to_noise"), py::arg("cu_coeff"), py::arg("cu_threshold"), py::arg("max_power"));

  m.def("run_campaign",
        [](const ScenarioConfig& config, const TableSet& tables, int jobs) {
          RateReport r;
          {
            py::gil_scoped_release release;
            r = run_campaign(config, tables, {jobs});
          }
          py::dict d;
          d["iterations"] = r.iterations;
          d["skipped"] = r.skipped;
          d["ofdm"] = case_dict(r.of(D2dCase::Ofdm));
          d["fbmc"] = case_dict(r.of(D2dCase::Fbmc));
          return d;
        },
        py::arg("config"), py::arg("tables"), py::arg("jobs") = 0);
}
