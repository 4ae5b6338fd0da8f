#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pnrthresh/config_file.hpp"
#include "pnrthresh/errors.hpp"
#include "pnrthresh/photon_stats.hpp"
#include "pnrthresh/rangefinder.hpp"
#include "pnrthresh/sampler.hpp"
#include "pnrthresh/snr.hpp"

namespace py = pybind11;
using namespace pnrthresh;

namespace {

Grid grid_from(const std::vector<double>& values) { return Grid::from_values(values); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-number threshold detection: photon statistics, SNR analysis and "
            "rangefinder simulation";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SearchError>(m, "SearchError", PyExc_RuntimeError);
  py::register_exception<DegenerateNoiseError>(m, "DegenerateNoiseError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<SourceParams>(m, "SourceParams")
      .def(py::init<double, double>(), py::arg("n_p_mean"), py::arg("n_th_mean"))
      .def_property_readonly("n_p_mean", &SourceParams::n_p_mean)
      .def_property_readonly("n_th_mean", &SourceParams::n_th_mean)
      .def_property_readonly("x", &SourceParams::x)
      .def("__repr__", [](const SourceParams& p) {
        return "SourceParams(n_p_mean=" + std::to_string(p.n_p_mean()) +
               ", n_th_mean=" + std::to_string(p.n_th_mean()) + ")";
      });

  py::enum_<SourceKind>(m, "SourceKind")
      .value("Thermal", SourceKind::Thermal)
      .value("Poisson", SourceKind::Poisson)
      .value("Mixed", SourceKind::Mixed);

  py::class_<PhotonPmf>(m, "PhotonPmf")
      .def_readonly("kind", &PhotonPmf::kind)
      .def_readonly("params", &PhotonPmf::params)
      .def_readonly("probs", &PhotonPmf::probs)
      .def_readonly("residual", &PhotonPmf::residual)
      .def_property_readonly("n_max", &PhotonPmf::n_max);

  m.def("thermal_pmf", &thermal_pmf, py::arg("n"), py::arg("n_th_mean"));
  m.def("poisson_pmf", &poisson_pmf, py::arg("n"), py::arg("n_p_mean"));
  m.def("mixed_pmf", &mixed_pmf, py::arg("n"), py::arg("params"));
  m.def("incomplete_gamma_ratio", &incomplete_gamma_ratio, py::arg("y"), py::arg("k"));
  m.def("build_pmf", &build_pmf, py::arg("kind"), py::arg("params"),
        py::arg("tolerance") = kTruncationTolerance);
  m.def("thermal_tail", &thermal_tail, py::arg("threshold_n"), py::arg("n_th_mean"));
  m.def("mixed_tail", &mixed_tail, py::arg("threshold_n"), py::arg("params"));

  py::class_<CountSampleStream>(m, "CountSampleStream")
      .def(py::init([](std::uint64_t seed, std::uint64_t stream_id, SourceKind kind,
                       const SourceParams& params) {
             return CountSampleStream{seed, stream_id, kind, params};
           }),
           py::arg("seed"), py::arg("stream_id"), py::arg("kind"), py::arg("params"));
  m.def("sample_count", &sample_count, py::arg("stream"), py::arg("draw_index"));

  py::class_<AnalysisConfig>(m, "AnalysisConfig")
      .def(py::init<>())
      .def_readwrite("truncation_tolerance", &AnalysisConfig::truncation_tolerance)
      .def_readwrite("optimum_lo", &AnalysisConfig::optimum_lo)
      .def_readwrite("optimum_hi", &AnalysisConfig::optimum_hi)
      .def_readwrite("optimum_points", &AnalysisConfig::optimum_points)
      .def_readwrite("optimum_rel_tolerance", &AnalysisConfig::optimum_rel_tolerance)
      .def_readwrite("boundary_lo", &AnalysisConfig::boundary_lo)
      .def_readwrite("boundary_hi", &AnalysisConfig::boundary_hi)
      .def_readwrite("boundary_points", &AnalysisConfig::boundary_points)
      .def_readwrite("boundary_abs_tolerance", &AnalysisConfig::boundary_abs_tolerance)
      .def_readwrite("boundary_ratio_tolerance", &AnalysisConfig::boundary_ratio_tolerance);

  m.def("classical_snr", &classical_snr, py::arg("params"));
  m.def("quantum_snr", &quantum_snr, py::arg("params"), py::arg("threshold_n"));
  m.def("snr_ratio", &snr_ratio, py::arg("params"), py::arg("threshold_n"));
  m.def("quantum_snr_derivative", &quantum_snr_derivative, py::arg("params"),
        py::arg("threshold_n"));
  m.def("threshold_gap", &threshold_gap, py::arg("params"), py::arg("threshold_n"),
        py::arg("config") = AnalysisConfig{});

  py::class_<SnrReport>(m, "SnrReport")
      .def_readonly("params", &SnrReport::params)
      .def_readonly("classical", &SnrReport::classical)
      .def_readonly("quantum", &SnrReport::quantum)
      .def_readonly("ratio", &SnrReport::ratio);
  m.def(
      "make_snr_report",
      [](const SourceParams& p, const std::vector<std::uint32_t>& thresholds) {
        return make_snr_report(p, thresholds);
      },
      py::arg("params"), py::arg("thresholds"));

  m.def(
      "sweep_ratio",
      [](double n_th, const std::vector<std::uint32_t>& thresholds,
         const std::vector<double>& n_p_values) {
        std::vector<std::tuple<double, std::uint32_t, double>> out;
        for (const auto& r : sweep_ratio(n_th, thresholds, grid_from(n_p_values))) {
          out.emplace_back(r.n_p_mean, r.threshold_n, r.ratio);
        }
        return out;
      },
      py::arg("n_th_mean"), py::arg("thresholds"), py::arg("n_p_values"),
      "Rows (n_p_mean, threshold_n, ratio) grouped by threshold.");

  py::class_<OptimumPoint>(m, "OptimumPoint")
      .def_readonly("threshold_n", &OptimumPoint::threshold_n)
      .def_readonly("n_th_mean", &OptimumPoint::n_th_mean)
      .def_readonly("best_n_p_mean", &OptimumPoint::best_n_p_mean)
      .def_readonly("best_ratio", &OptimumPoint::best_ratio);
  m.def("find_optimum", &find_optimum, py::arg("n_th_mean"), py::arg("threshold_n"),
        py::arg("config") = AnalysisConfig{});

  py::class_<BoundaryPoint>(m, "BoundaryPoint")
      .def_readonly("n_th_mean", &BoundaryPoint::n_th_mean)
      .def_readonly("n_p_mean", &BoundaryPoint::n_p_mean)
      .def_readonly("ratio", &BoundaryPoint::ratio)
      .def_readonly("crossings", &BoundaryPoint::crossings);
  py::class_<BoundaryCurve>(m, "BoundaryCurve")
      .def_readonly("threshold_n", &BoundaryCurve::threshold_n)
      .def_readonly("points", &BoundaryCurve::points)
      .def_readonly("no_boundary", &BoundaryCurve::no_boundary)
      .def_readonly("tolerance", &BoundaryCurve::tolerance)
      .def_property_readonly("area", &boundary_area)
      .def_property_readonly("knee", &boundary_knee);
  m.def(
      "find_boundary",
      [](std::uint32_t n, const std::vector<double>& n_th_values, const AnalysisConfig& c) {
        return find_boundary(n, grid_from(n_th_values), c);
      },
      py::arg("threshold_n"), py::arg("n_th_values"), py::arg("config") = AnalysisConfig{});

  py::class_<Target>(m, "Target")
      .def(py::init<std::uint32_t, double>(), py::arg("bin"), py::arg("signal_mean"))
      .def_readwrite("bin", &Target::bin)
      .def_readwrite("signal_mean", &Target::signal_mean);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("num_bins", &SimConfig::num_bins)
      .def_readwrite("noise_mean", &SimConfig::noise_mean)
      .def_readwrite("targets", &SimConfig::targets)
      .def_readwrite("thresholds", &SimConfig::thresholds)
      .def_readwrite("repetitions", &SimConfig::repetitions)
      .def_readwrite("seed", &SimConfig::seed)
      .def("validate", &SimConfig::validate)
      .def("noise_bins", &SimConfig::noise_bins)
      .def("__eq__", [](const SimConfig& a, const SimConfig& b) { return a == b; });
  m.def("four_target_config", &four_target_config, py::arg("repetitions"), py::arg("seed"));
  m.def("parse_sim_config", &parse_sim_config, py::arg("text"),
        py::arg("source_name") = "<config>");
  m.def("format_sim_config", &format_sim_config, py::arg("config"));

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("config", &SimResult::config)
      .def_readonly("noise_bins", &SimResult::noise_bins)
      .def_readonly("intensity_raw", &SimResult::intensity_raw)
      .def_readonly("threshold_raw", &SimResult::threshold_raw)
      .def_readonly("intensity_norm", &SimResult::intensity_norm)
      .def_readonly("threshold_norm", &SimResult::threshold_norm);
  m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<RatioEstimate>(m, "RatioEstimate")
      .def_readonly("bin_index", &RatioEstimate::bin_index)
      .def_readonly("threshold_n", &RatioEstimate::threshold_n)
      .def_readonly("threshold_norm", &RatioEstimate::threshold_norm)
      .def_readonly("intensity_norm", &RatioEstimate::intensity_norm)
      .def_readonly("ratio", &RatioEstimate::ratio)
      .def_readonly("threshold_se", &RatioEstimate::threshold_se)
      .def_readonly("intensity_se", &RatioEstimate::intensity_se)
      .def_readonly("ratio_se", &RatioEstimate::ratio_se);
  m.def("estimate_ratio", &estimate_ratio, py::arg("result"), py::arg("bin_index"),
        py::arg("threshold_n"));

  py::class_<ExpectedResult>(m, "ExpectedResult")
      .def_readonly("intensity", &ExpectedResult::intensity)
      .def_readonly("threshold", &ExpectedResult::threshold);
  m.def("expected_result", &expected_result, py::arg("config"));
}
