#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsaqos/arrival.hpp"
#include "dsaqos/config.hpp"
#include "dsaqos/errors.hpp"
#include "dsaqos/ld.hpp"
#include "dsaqos/optimize.hpp"
#include "dsaqos/policy.hpp"
#include "dsaqos/sim.hpp"

namespace py = pybind11;
using namespace dsaqos;

PYBIND11_MODULE(dsaqos, m) {
    m.doc() = "Stopping-policy optimization for sensing-limited transmitters: "
              "large-deviations delay QoS, policy search, and queue simulation";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<MarkovArrivalProcess>(m, "MarkovArrivalProcess")
        .def(py::init<std::vector<std::vector<double>>, std::vector<double>>(),
             py::arg("transition"), py::arg("values"))
        .def_property_readonly("num_states", &MarkovArrivalProcess::num_states)
        .def_property_readonly("transition", &MarkovArrivalProcess::transition)
        .def_property_readonly("values", &MarkovArrivalProcess::values)
        .def("stationary_distribution", &MarkovArrivalProcess::stationary_distribution)
        .def("mean_rate", &MarkovArrivalProcess::mean_rate)
        .def("log_mgf", &MarkovArrivalProcess::log_mgf, py::arg("theta"))
        .def("scaled", &MarkovArrivalProcess::scaled, py::arg("alpha"));

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](int W, int K, double c, double p_idle) {
                 SystemParams p{W, K, c, p_idle};
                 p.validate();
                 return p;
             }),
             py::arg("W"), py::arg("K"), py::arg("c"), py::arg("p_idle"))
        .def_readwrite("W", &SystemParams::W)
        .def_readwrite("K", &SystemParams::K)
        .def_readwrite("c", &SystemParams::c)
        .def_readwrite("p_idle", &SystemParams::p_idle)
        .def("validate", &SystemParams::validate);

    py::class_<PolicyMatrix>(m, "PolicyMatrix")
        .def(py::init<int>(), py::arg("W"))
        .def_static("all_ones", &PolicyMatrix::all_ones, py::arg("W"))
        .def_static("from_thresholds", &PolicyMatrix::from_thresholds, py::arg("x"),
                    py::arg("W"))
        .def_static("from_bits", &PolicyMatrix::from_bits, py::arg("W"), py::arg("bits"))
        .def_static("from_text", &PolicyMatrix::from_text, py::arg("text"))
        .def_static("load", &PolicyMatrix::load, py::arg("path"))
        .def_static("free_entry_count", &PolicyMatrix::free_entry_count, py::arg("W"))
        .def_property_readonly("dimension", &PolicyMatrix::dimension)
        .def("at", &PolicyMatrix::at, py::arg("k"), py::arg("s"))
        .def("set", &PolicyMatrix::set, py::arg("k"), py::arg("s"), py::arg("stop"))
        .def("is_staircase", &PolicyMatrix::is_staircase)
        .def("zero_prefix_lengths", &PolicyMatrix::zero_prefix_lengths)
        .def("bits", &PolicyMatrix::bits)
        .def("to_text", &PolicyMatrix::to_text)
        .def("save", &PolicyMatrix::save, py::arg("path"))
        .def(py::self == py::self)
        .def("__repr__", [](const PolicyMatrix& p) {
            return "PolicyMatrix(W=" + std::to_string(p.dimension()) + ")";
        });

    py::class_<RateAtom>(m, "RateAtom")
        .def(py::init([](double rate, double prob) { return RateAtom{rate, prob}; }),
             py::arg("rate"), py::arg("prob"))
        .def_readwrite("rate", &RateAtom::rate)
        .def_readwrite("prob", &RateAtom::prob);

    py::class_<ServiceSpectrum>(m, "ServiceSpectrum")
        .def(py::init<std::vector<RateAtom>>(), py::arg("atoms"))
        .def_property_readonly("atoms", &ServiceSpectrum::atoms)
        .def("mean_rate", &ServiceSpectrum::mean_rate)
        .def("min_rate", &ServiceSpectrum::min_rate)
        .def("max_rate", &ServiceSpectrum::max_rate)
        .def("log_mgf_neg", &ServiceSpectrum::log_mgf_neg, py::arg("theta"));

    m.def("enumerate_leaves", &enumerate_leaves, py::arg("policy"), py::arg("params"));

    py::class_<QosResult>(m, "QosResult")
        .def(py::init<>())
        .def_readwrite("theta_star", &QosResult::theta_star)
        .def_readwrite("delta", &QosResult::delta)
        .def_readwrite("p_delay", &QosResult::p_delay);

    m.def("qos_gap", &qos_gap, py::arg("proc"), py::arg("spectrum"), py::arg("theta"));
    m.def("find_theta_star", &find_theta_star, py::arg("proc"), py::arg("spectrum"),
          py::arg("theta_cap") = kDefaultThetaCap);
    m.def("qos_from_theta", &qos_from_theta, py::arg("proc"), py::arg("theta_star"),
          py::arg("d_max"));
    m.def("evaluate_policy", &evaluate_policy, py::arg("proc"), py::arg("params"),
          py::arg("policy"), py::arg("d_max"), py::arg("theta_cap") = kDefaultThetaCap);

    py::enum_<Algorithm>(m, "Algorithm")
        .value("exhaustive", Algorithm::exhaustive)
        .value("staircase", Algorithm::staircase)
        .value("greedy", Algorithm::greedy)
        .value("dp_throughput", Algorithm::dp_throughput)
        .value("dp_theta", Algorithm::dp_theta);

    py::class_<OptimizationReport>(m, "OptimizationReport")
        .def_readonly("best_policy", &OptimizationReport::best_policy)
        .def_readonly("best_qos", &OptimizationReport::best_qos)
        .def_readonly("candidates_evaluated", &OptimizationReport::candidates_evaluated)
        .def_readonly("algorithm", &OptimizationReport::algorithm);

    m.def("exhaustive_search", &exhaustive_search, py::arg("proc"), py::arg("params"),
          py::arg("d_max"), py::arg("theta_cap") = kDefaultThetaCap);
    m.def("algorithm_a", &algorithm_a, py::arg("proc"), py::arg("params"), py::arg("d_max"),
          py::arg("theta_cap") = kDefaultThetaCap);
    m.def("algorithm_b", &algorithm_b, py::arg("proc"), py::arg("params"), py::arg("d_max"),
          py::arg("theta_cap") = kDefaultThetaCap);
    m.def("dp_throughput", &dp_throughput, py::arg("params"));
    m.def("min_laplace_policy", &min_laplace_policy, py::arg("params"), py::arg("theta"));
    m.def("dp_theta", &dp_theta, py::arg("proc"), py::arg("params"), py::arg("d_max"),
          py::arg("max_rounds") = 50, py::arg("theta_cap") = kDefaultThetaCap);
    m.def("optimize", &optimize, py::arg("algorithm"), py::arg("proc"), py::arg("params"),
          py::arg("d_max"), py::arg("theta_cap") = kDefaultThetaCap,
          py::arg("dp_theta_rounds") = 50);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](std::uint64_t horizon, std::uint64_t seed, std::uint64_t warmup,
                         double backlog_guard) {
                 SimConfig c{horizon, seed, warmup, backlog_guard};
                 c.validate();
                 return c;
             }),
             py::arg("horizon"), py::arg("seed"), py::arg("warmup") = 0,
             py::arg("backlog_guard") = 1e9)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("warmup", &SimConfig::warmup)
        .def_readwrite("backlog_guard", &SimConfig::backlog_guard);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("delay_mass", &SimResult::delay_mass)
        .def_readonly("delay_count", &SimResult::delay_count)
        .def_readonly("mean_queue", &SimResult::mean_queue)
        .def_readonly("samples", &SimResult::samples)
        .def_readonly("total_mass", &SimResult::total_mass)
        .def("p_delay_empirical", &SimResult::p_delay_empirical, py::arg("d"))
        .def("exceedances", &SimResult::exceedances, py::arg("d"))
        .def("max_delay", &SimResult::max_delay);

    m.def("simulate", &simulate, py::arg("proc"), py::arg("spectrum"), py::arg("cfg"));

    py::class_<ValidationRow>(m, "ValidationRow")
        .def_readonly("d", &ValidationRow::d)
        .def_readonly("p_empirical", &ValidationRow::p_empirical)
        .def_readonly("p_ld", &ValidationRow::p_ld)
        .def_readonly("samples", &ValidationRow::samples);

    py::class_<ValidationTable>(m, "ValidationTable")
        .def_readonly("rows", &ValidationTable::rows)
        .def_readonly("theta_star", &ValidationTable::theta_star)
        .def_readonly("delta", &ValidationTable::delta)
        .def_readonly("slope", &ValidationTable::slope)
        .def_readonly("slope_valid", &ValidationTable::slope_valid)
        .def_readonly("tail_sufficient", &ValidationTable::tail_sufficient);

    m.def("validate_ld", &validate_ld, py::arg("proc"), py::arg("params"), py::arg("policy"),
          py::arg("d_range"), py::arg("cfg"), py::arg("theta_cap") = kDefaultThetaCap);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readonly("params", &ExperimentConfig::params)
        .def_readonly("arrivals", &ExperimentConfig::arrivals)
        .def_readonly("d_max", &ExperimentConfig::d_max)
        .def_readonly("sweep", &ExperimentConfig::sweep)
        .def_readonly("algorithms", &ExperimentConfig::algorithms)
        .def_readonly("sim", &ExperimentConfig::sim)
        .def_readonly("sim_d_values", &ExperimentConfig::sim_d_values);

    m.def("parse_config", &parse_config, py::arg("path"));
}
