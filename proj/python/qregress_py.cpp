#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qregress/cvqnn.hpp"
#include "qregress/dataset.hpp"
#include "qregress/fock.hpp"
#include "qregress/qbmlp.hpp"
#include "qregress/stats.hpp"

namespace py = pybind11;
using namespace qregress;

namespace {

py::array_t<std::complex<double>> amplitudes_array(const fock::FockState& s) {
  const auto amps = s.amplitudes();
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(amps.size()), amps.data());
}

void add_fock(py::module_& m) {
  py::class_<fock::FockState>(m, "FockState")
      .def(py::init<std::size_t, std::size_t>(), py::arg("modes"), py::arg("cutoff"))
      .def_property_readonly("modes", &fock::FockState::modes)
      .def_property_readonly("cutoff", &fock::FockState::cutoff)
      .def_property_readonly("size", &fock::FockState::size)
      .def("amplitudes", &amplitudes_array, "Copy of the amplitude vector (mode-major order)")
      .def("__len__", &fock::FockState::size);

  py::class_<fock::Displacement>(m, "Displacement")
      .def(py::init<std::complex<double>>(), py::arg("alpha"))
      .def_readwrite("alpha", &fock::Displacement::alpha);
  py::class_<fock::Squeeze>(m, "Squeeze")
      .def(py::init<double, double>(), py::arg("r"), py::arg("phi") = 0.0)
      .def_readwrite("r", &fock::Squeeze::r)
      .def_readwrite("phi", &fock::Squeeze::phi);
  py::class_<fock::Rotation>(m, "Rotation").def(py::init<double>(), py::arg("phi")).def_readwrite("phi", &fock::Rotation::phi);
  py::class_<fock::Kerr>(m, "Kerr").def(py::init<double>(), py::arg("kappa")).def_readwrite("kappa", &fock::Kerr::kappa);
  py::class_<fock::Beamsplitter>(m, "Beamsplitter")
      .def(py::init<double, double>(), py::arg("theta"), py::arg("phi") = 0.0)
      .def_readwrite("theta", &fock::Beamsplitter::theta)
      .def_readwrite("phi", &fock::Beamsplitter::phi);

  py::class_<fock::GateMatrix>(m, "GateMatrix")
      .def_property_readonly("arity", &fock::GateMatrix::arity)
      .def_property_readonly("cutoff", &fock::GateMatrix::cutoff)
      .def_property_readonly("entries", [](const fock::GateMatrix& g) { return Eigen::MatrixXcd(g.entries()); });

  m.def("vacuum_state", &fock::vacuum_state, py::arg("modes"), py::arg("cutoff"));
  m.def("build_gate", &fock::build_gate, py::arg("spec"), py::arg("cutoff"));
  m.def(
      "apply_gate",
      [](const fock::FockState& s, const fock::GateMatrix& g, const std::vector<std::size_t>& modes) {
        return fock::apply_gate(s, g, std::span<const std::size_t>(modes));
      },
      py::arg("state"), py::arg("gate"), py::arg("modes"));
  m.def("expectation_x", &fock::expectation_x, py::arg("state"), py::arg("mode"));
  m.def("norm", &fock::norm, py::arg("state"));
  m.def("photon_distribution", &fock::photon_distribution, py::arg("state"), py::arg("mode"));
}

void add_cvqnn(py::module_& m) {
  auto cv = m.def_submodule("cvqnn", "Continuous-variable quantum neural network");
  py::enum_<cvqnn::Variant>(cv, "Variant")
      .value("Standard", cvqnn::Variant::Standard)
      .value("Modified", cvqnn::Variant::Modified);

  py::class_<cvqnn::Network>(cv, "Network")
      .def_static("zeros", &cvqnn::Network::zeros, py::arg("modes"), py::arg("cutoff"), py::arg("layers"),
                  py::arg("variant") = cvqnn::Variant::Standard)
      .def_readonly("modes", &cvqnn::Network::modes)
      .def_readonly("cutoff", &cvqnn::Network::cutoff)
      .def_readonly("variant", &cvqnn::Network::variant)
      .def_property(
          "gain", [](const cvqnn::Network& n) { return n.scale.gain; },
          [](cvqnn::Network& n, double v) { n.scale.gain = v; })
      .def_property(
          "offset", [](const cvqnn::Network& n) { return n.scale.offset; },
          [](cvqnn::Network& n, double v) { n.scale.offset = v; })
      .def_property(
          "parameters", [](const cvqnn::Network& n) { return cvqnn::flatten(n); },
          [](cvqnn::Network& n, const std::vector<double>& p) { cvqnn::unflatten(n, p); })
      .def("to_json", [](const cvqnn::Network& n) { return cvqnn::to_json(n).dump(); })
      .def_static("from_json", [](const std::string& s) { return cvqnn::network_from_json(nlohmann::json::parse(s)); });

  py::class_<cvqnn::TrainConfig>(cv, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &cvqnn::TrainConfig::learning_rate)
      .def_readwrite("iterations", &cvqnn::TrainConfig::iterations)
      .def_readwrite("fd_epsilon", &cvqnn::TrainConfig::fd_epsilon)
      .def_readwrite("seed", &cvqnn::TrainConfig::seed)
      .def_readwrite("init_spread", &cvqnn::TrainConfig::init_spread);

  cv.def(
      "encode_input", [](const std::vector<double>& x, std::size_t cutoff) { return cvqnn::encode_input(x, cutoff); },
      py::arg("features"), py::arg("cutoff"));
  cv.def(
      "forward", [](const std::vector<double>& x, const cvqnn::Network& n) { return cvqnn::forward(x, n); },
      py::arg("features"), py::arg("network"));
  cv.def(
      "cost_mse",
      [](const std::vector<double>& p, const std::vector<double>& t) { return cvqnn::cost_mse(p, t); },
      py::arg("predicted"), py::arg("target"));
  cv.def(
      "grad_fd",
      [](const cvqnn::Network& n, std::vector<std::vector<double>> x, std::vector<double> y, double eps) {
        return cvqnn::grad_fd(n, {std::move(x), std::move(y)}, eps);
      },
      py::arg("network"), py::arg("features"), py::arg("targets"), py::arg("eps") = 1e-4);
  cv.def(
      "train_sgd",
      [](const cvqnn::Network& n, std::vector<std::vector<double>> x, std::vector<double> y,
         const cvqnn::TrainConfig& cfg) {
        auto r = cvqnn::train_sgd(n, {std::move(x), std::move(y)}, cfg);
        return py::make_tuple(r.network, r.cost_trace);
      },
      py::arg("network"), py::arg("features"), py::arg("targets"), py::arg("config"));
}

void add_qbmlp(py::module_& m) {
  auto qb = m.def_submodule("qbmlp", "Quantum-inspired backpropagation multilayer perceptron");
  py::class_<qbmlp::Network>(qb, "Network")
      .def_readonly("learning_rate", &qbmlp::Network::learning_rate)
      .def_readonly("iterations", &qbmlp::Network::iterations)
      .def_readonly("seed", &qbmlp::Network::seed)
      .def_property_readonly("input_width", &qbmlp::Network::input_width)
      .def("to_json", [](const qbmlp::Network& n) { return qbmlp::to_json(n).dump(); })
      .def_static("from_json", [](const std::string& s) { return qbmlp::network_from_json(nlohmann::json::parse(s)); });

  qb.def(
      "make_network",
      [](const std::vector<std::size_t>& widths, std::uint64_t seed) { return qbmlp::make_network(widths, seed); },
      py::arg("widths") = std::vector<std::size_t>{3, 3, 1}, py::arg("seed") = 0);
  qb.def(
      "encode_angle", [](double x) { return qbmlp::encode_angle(x); }, py::arg("x"));
  qb.def(
      "network_forward",
      [](const std::vector<double>& x, const qbmlp::Network& n) { return qbmlp::network_forward(x, n); },
      py::arg("features"), py::arg("network"));
  qb.def(
      "train",
      [](const qbmlp::Network& n, const std::vector<std::vector<double>>& x, const std::vector<double>& y,
         double lr, std::size_t iterations) {
        if (x.size() != y.size()) throw DimensionError("features and targets differ in length");
        std::vector<qbmlp::Sample> samples;
        for (std::size_t i = 0; i < x.size(); ++i) samples.push_back({x[i], y[i]});
        auto r = qbmlp::train(n, samples, lr, iterations);
        return py::make_tuple(r.network, r.cost_trace);
      },
      py::arg("network"), py::arg("features"), py::arg("targets"), py::arg("learning_rate") = 0.001,
      py::arg("iterations") = 15000);
}

void add_data_and_stats(py::module_& m) {
  auto d = m.def_submodule("data", "Time-series ingestion and fuzzy scaling");
  py::class_<data::FuzzyScale>(d, "FuzzyScale")
      .def(py::init<double, double>(), py::arg("min"), py::arg("max"))
      .def_readwrite("min", &data::FuzzyScale::min)
      .def_readwrite("max", &data::FuzzyScale::max);
  d.def(
      "fuzzify",
      [](const std::vector<double>& v) {
        auto [values, scale] = data::fuzzify(v);
        return py::make_tuple(values, scale);
      },
      py::arg("values"));
  d.def("defuzzify", &data::defuzzify, py::arg("value"), py::arg("scale"));
  d.def(
      "canonicalize",
      [](const std::string& csv) { return data::to_canonical_csv(data::derive_features(data::parse_timeseries(csv))); },
      py::arg("csv"), "Parse a date,confirmed,deaths,recovered CSV and return the canonical CSV");

  auto st = m.def_submodule("stats", "Two-sample t-test and regression metrics");
  py::class_<stats::TTestReport>(st, "TTestReport")
      .def_readonly("statistic", &stats::TTestReport::statistic)
      .def_readonly("p_value", &stats::TTestReport::p_value)
      .def_readonly("df", &stats::TTestReport::df)
      .def_readonly("n_a", &stats::TTestReport::n_a)
      .def_readonly("n_b", &stats::TTestReport::n_b);
  st.def(
      "t_test_two_tailed",
      [](const std::vector<double>& a, const std::vector<double>& b, bool pooled) {
        return stats::t_test_two_tailed(a, b, pooled ? stats::TTestKind::Student : stats::TTestKind::Welch);
      },
      py::arg("a"), py::arg("b"), py::arg("pooled") = false);
  py::class_<stats::Metrics>(st, "Metrics")
      .def_readonly("mse", &stats::Metrics::mse)
      .def_readonly("mae", &stats::Metrics::mae)
      .def_readonly("n", &stats::Metrics::n);
  st.def(
      "metrics",
      [](const std::vector<double>& p, const std::vector<double>& a) { return stats::metrics(p, a); },
      py::arg("predicted"), py::arg("actual"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum regression workbench: Fock-basis CV simulation, CVQNN, QBMLP and t-test reporting";

  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<SizeError>(m, "SizeError", base.ptr());
  py::register_exception<DegenerateScaleError>(m, "DegenerateScaleError", base.ptr());
  py::register_exception<DegenerateStateError>(m, "DegenerateStateError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());

  add_fock(m);
  add_cvqnn(m);
  add_qbmlp(m);
  add_data_and_stats(m);
}
