// Python bindings for the two-qudit gravitational entanglement toolkit.
// Exposes the pipeline (geometry -> phases -> state -> density -> witness),
// the operator-basis machinery, the finite-shot simulator, and the sweep
// drivers.  Matrices cross the boundary as numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgem/basis.hpp"
#include "qgem/io.hpp"
#include "qgem/sweep.hpp"

namespace py = pybind11;
using namespace qgem;

PYBIND11_MODULE(_qgem, m) {
  m.doc() = "Two-qudit gravitational entanglement simulator";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ConfigError>(m, "ConfigurationError",
                                      PyExc_ValueError);

  py::enum_<Setup>(m, "Setup")
      .value("parallel", Setup::parallel)
      .value("linear", Setup::linear)
      .value("custom", Setup::custom);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("dimension", &ExperimentConfig::dimension)
      .def_readwrite("superposition_width",
                     &ExperimentConfig::superposition_width)
      .def_readwrite("min_distance", &ExperimentConfig::min_distance)
      .def_readwrite("mass_1", &ExperimentConfig::mass_1)
      .def_readwrite("mass_2", &ExperimentConfig::mass_2)
      .def_readwrite("hold_time", &ExperimentConfig::hold_time)
      .def_readwrite("decoherence_rate", &ExperimentConfig::decoherence_rate)
      .def_readwrite("theta_1", &ExperimentConfig::theta_1)
      .def_readwrite("theta_2", &ExperimentConfig::theta_2)
      .def_readwrite("gravitational_constant",
                     &ExperimentConfig::gravitational_constant)
      .def_readwrite("reduced_planck", &ExperimentConfig::reduced_planck)
      .def("validate", &ExperimentConfig::validate)
      .def_static("preset", &ExperimentConfig::preset, py::arg("setup"),
                  py::arg("dimension") = 2);

  py::class_<DistanceMatrix>(m, "DistanceMatrix")
      .def_readonly("entries", &DistanceMatrix::entries)
      .def_readonly("arm_1", &DistanceMatrix::arm_1)
      .def_readonly("arm_2", &DistanceMatrix::arm_2)
      .def_readonly("opening", &DistanceMatrix::opening)
      .def_property_readonly("dimension", &DistanceMatrix::dimension);

  py::class_<GeometryReport>(m, "GeometryReport")
      .def_readonly("ok", &GeometryReport::ok)
      .def_readonly("offending", &GeometryReport::offending);

  m.def("distance_matrix", &distance_matrix, py::arg("config"));
  m.def("validate_geometry", &validate_geometry, py::arg("distances"),
        py::arg("config"));
  m.def("phase_matrix", &phase_matrix, py::arg("distances"),
        py::arg("config"));

  py::class_<JointPureState>(m, "JointPureState")
      .def_readonly("amplitudes", &JointPureState::amplitudes)
      .def_property_readonly("dimension", &JointPureState::dimension)
      .def("norm", &JointPureState::norm);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_readonly("rho", &DensityMatrix::rho)
      .def_readonly("is_pure", &DensityMatrix::is_pure)
      .def_readonly("gamma_applied", &DensityMatrix::gamma_applied)
      .def_readonly("tau_applied", &DensityMatrix::tau_applied)
      .def_property_readonly("joint_dimension", &DensityMatrix::joint_dimension)
      .def_property_readonly("qudit_dimension", &DensityMatrix::qudit_dimension);

  m.def("superposed_state", &superposed_state, py::arg("phases"));
  m.def("density_matrix", &density_matrix, py::arg("state"));
  m.def("apply_decoherence", &apply_decoherence, py::arg("state"),
        py::arg("gamma"), py::arg("tau"));
  m.def("make_state", &make_state, py::arg("config"));
  m.def("make_density", &make_density, py::arg("config"));

  m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("traced_out"));
  m.def("partial_transpose", &partial_transpose, py::arg("rho"));
  m.def("entanglement_entropy", &entanglement_entropy, py::arg("rho"));

  py::enum_<WitnessKind>(m, "WitnessKind")
      .value("ppt", WitnessKind::ppt)
      .value("vicinity", WitnessKind::vicinity);

  py::class_<Witness>(m, "Witness")
      .def_readonly("matrix", &Witness::matrix)
      .def_readonly("kind", &Witness::kind)
      .def_readonly("dimension", &Witness::dimension)
      .def_readonly("negative_eigenvalue", &Witness::negative_eigenvalue)
      .def_readonly("schmidt_max", &Witness::schmidt_max)
      .def_readonly("built_tau", &Witness::built_tau);

  m.def("build_ppt_witness", &build_ppt_witness, py::arg("pure_state"));
  m.def("build_vicinity_witness", &build_vicinity_witness, py::arg("state"));
  m.def("witness_expectation", &witness_expectation, py::arg("witness"),
        py::arg("rho"));
  m.def("make_witness", &make_witness, py::arg("config"), py::arg("kind"));

  py::enum_<BasisFamily>(m, "BasisFamily")
      .value("identity", BasisFamily::identity)
      .value("symmetric", BasisFamily::symmetric)
      .value("antisymmetric", BasisFamily::antisymmetric)
      .value("diagonal", BasisFamily::diagonal);

  py::class_<BasisElement>(m, "BasisElement")
      .def_readonly("index", &BasisElement::index)
      .def_readonly("family", &BasisElement::family)
      .def_readonly("matrix", &BasisElement::matrix)
      .def_readonly("hs_norm_sq", &BasisElement::hs_norm_sq);

  m.def("gell_mann_basis", &gell_mann_basis, py::arg("dimension"));

  py::class_<WitnessTerm>(m, "WitnessTerm")
      .def_readonly("i", &WitnessTerm::i)
      .def_readonly("j", &WitnessTerm::j)
      .def_readonly("coefficient", &WitnessTerm::coefficient);

  py::class_<WitnessDecomposition>(m, "WitnessDecomposition")
      .def_readonly("dimension", &WitnessDecomposition::dimension)
      .def_readonly("terms", &WitnessDecomposition::terms)
      .def_readonly("total_weight", &WitnessDecomposition::total_weight)
      .def_readonly("epsilon_abs", &WitnessDecomposition::epsilon_abs);

  m.def("decompose_witness", &decompose_witness, py::arg("witness"),
        py::arg("epsilon_rel") = 1e-8);
  m.def("reconstruct_witness", &reconstruct_witness, py::arg("decomp"),
        py::arg("basis"));

  py::class_<CommutationGraph>(m, "CommutationGraph")
      .def_readonly("term_of_vertex", &CommutationGraph::term_of_vertex)
      .def_property_readonly("vertex_count", &CommutationGraph::vertex_count)
      .def("degree", &CommutationGraph::degree, py::arg("vertex"))
      .def(
          "edge",
          [](const CommutationGraph& graph, int u, int v) {
            return graph.adjacency.at(u).at(v) != 0;
          },
          py::arg("u"), py::arg("v"));

  m.def("commutation_graph", &commutation_graph, py::arg("decomp"),
        py::arg("basis"));

  py::class_<MeasurementGroup>(m, "MeasurementGroup")
      .def_readonly("members", &MeasurementGroup::members)
      .def_readonly("weight", &MeasurementGroup::weight)
      .def_readonly("eigenbasis", &MeasurementGroup::eigenbasis)
      .def_readonly("member_values", &MeasurementGroup::member_values);

  m.def("group_terms_ldfc", &group_terms_ldfc, py::arg("graph"),
        py::arg("decomp"), py::arg("basis"));
  m.def("term_operator", &term_operator, py::arg("term"), py::arg("basis"));

  m.def("allocate_shots", &allocate_shots, py::arg("weights"),
        py::arg("total"));

  py::enum_<SampleMode>(m, "SampleMode")
      .value("per_term", SampleMode::per_term)
      .value("grouped", SampleMode::grouped);

  py::class_<ConfidenceReport>(m, "ConfidenceReport")
      .def_readonly("estimate", &ConfidenceReport::estimate)
      .def_readonly("variance", &ConfidenceReport::variance)
      .def_readonly("std_error", &ConfidenceReport::std_error)
      .def_readonly("avg_shots", &ConfidenceReport::avg_shots)
      .def_readonly("t_value", &ConfidenceReport::t_value)
      .def_readonly("confidence", &ConfidenceReport::confidence)
      .def_readonly("ci_level", &ConfidenceReport::ci_level)
      .def_readonly("ci_low", &ConfidenceReport::ci_low)
      .def_readonly("ci_high", &ConfidenceReport::ci_high);

  m.def("confidence_level",
        py::overload_cast<double, double, double>(&confidence_level),
        py::arg("estimate"), py::arg("std_error"), py::arg("avg_shots"));

  py::class_<TrialSettings>(m, "TrialSettings")
      .def(py::init<>())
      .def_readwrite("kind", &TrialSettings::kind)
      .def_readwrite("mode", &TrialSettings::mode)
      .def_readwrite("shots", &TrialSettings::shots)
      .def_readwrite("repetitions", &TrialSettings::repetitions)
      .def_readwrite("seed", &TrialSettings::seed)
      .def_readwrite("epsilon_rel", &TrialSettings::epsilon_rel)
      .def_readwrite("ci_level", &TrialSettings::ci_level);

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("shots", &TrialResult::shots)
      .def_readonly("mode", &TrialResult::mode)
      .def_readonly("mean_confidence", &TrialResult::mean_confidence)
      .def_readonly("std_confidence", &TrialResult::std_confidence)
      .def_readonly("mean_estimate", &TrialResult::mean_estimate)
      .def_readonly("mean_std_error", &TrialResult::mean_std_error)
      .def_readonly("reports", &TrialResult::reports);

  m.def("run_trial", &run_trial, py::arg("config"), py::arg("settings"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("min", &GridSpec::min)
      .def_readwrite("max", &GridSpec::max)
      .def_readwrite("points", &GridSpec::points)
      .def_readwrite("log_scale", &GridSpec::log_scale)
      .def("values", &GridSpec::values);

  py::enum_<Metric>(m, "Metric")
      .value("entropy", Metric::entropy)
      .value("witness_expectation", Metric::witness_expectation);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("config", &SweepSpec::config)
      .def_readwrite("dimensions", &SweepSpec::dimensions)
      .def_readwrite("grid", &SweepSpec::grid)
      .def_readwrite("metric", &SweepSpec::metric)
      .def_readwrite("witness", &SweepSpec::witness);

  py::class_<SweepTable>(m, "SweepTable")
      .def_readonly("columns", &SweepTable::columns)
      .def_readonly("rows", &SweepTable::rows);

  py::class_<HeatmapResult>(m, "HeatmapResult")
      .def_readonly("theta_1", &HeatmapResult::theta_1)
      .def_readonly("theta_2", &HeatmapResult::theta_2)
      .def_readonly("entropy", &HeatmapResult::entropy)
      .def_property_readonly("valid",
                             [](const HeatmapResult& result) {
                               return result.valid.cast<int>().eval();
                             })
      .def("to_table", &HeatmapResult::to_table);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("shots", &CurvePoint::shots)
      .def_readonly("mean_confidence", &CurvePoint::mean_confidence)
      .def_readonly("std_confidence", &CurvePoint::std_confidence)
      .def_readonly("mean_estimate", &CurvePoint::mean_estimate)
      .def_readonly("mean_std_error", &CurvePoint::mean_std_error);

  m.def("time_sweep", &time_sweep, py::arg("spec"));
  m.def("decoherence_sweep", &decoherence_sweep, py::arg("spec"));
  m.def("angle_heatmap", &angle_heatmap, py::arg("config"),
        py::arg("points") = 101);
  m.def("width_sweep", &width_sweep, py::arg("spec"), py::arg("scaled"),
        py::arg("scale_factor") = 1.0);
  m.def("runtime_tradeoff", &runtime_tradeoff, py::arg("spec"),
        py::arg("tau_values"));
  m.def("measurement_curve", &measurement_curve, py::arg("config"),
        py::arg("settings"), py::arg("budget_min"), py::arg("budget_max"),
        py::arg("points_per_decade") = 25);
  m.def("budget_grid", &budget_grid, py::arg("budget_min"),
        py::arg("budget_max"), py::arg("points_per_decade"));

  m.def("parse_quantity", &parse_quantity, py::arg("text"));
  m.def("config_from_json_text", &config_from_json_text, py::arg("text"));
  m.def("config_to_json_text", &config_to_json_text, py::arg("config"));
}
