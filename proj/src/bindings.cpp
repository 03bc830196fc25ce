#include "riswpt/config_io.hpp"
#include "riswpt/model.hpp"
#include "riswpt/oracle.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace riswpt;

PYBIND11_MODULE(_riswpt, m) {
    m.doc() = "RIS-aided constant-envelope wireless power transfer";

    py::register_exception<InfeasibleError>(m, "InfeasibleError");

    py::class_<ChannelSet>(m, "ChannelSet")
        .def(py::init<CMatrix, CMatrix, CMatrix, RVector, std::vector<int>>(), py::arg("H_d"),
             py::arg("H_r"), py::arg("S"), py::arg("beta"),
             py::arg("sections") = std::vector<int>{})
        .def_readonly("H_d", &ChannelSet::H_d)
        .def_readonly("H_r", &ChannelSet::H_r)
        .def_readonly("S", &ChannelSet::S)
        .def_readonly("G", &ChannelSet::G)
        .def_readonly("beta", &ChannelSet::beta)
        .def_property_readonly("K", &ChannelSet::num_users)
        .def_property_readonly("M", &ChannelSet::num_antennas)
        .def_property_readonly("N", &ChannelSet::num_elements);

    py::class_<TxBeamformer>(m, "TxBeamformer")
        .def(py::init<RVector, double>(), py::arg("alpha"), py::arg("power"))
        .def_readonly("alpha", &TxBeamformer::alpha)
        .def_readonly("power", &TxBeamformer::power)
        .def("weights", &TxBeamformer::weights);

    py::class_<RisPhases>(m, "RisPhases")
        .def(py::init<RVector>(), py::arg("theta"))
        .def_readonly("theta", &RisPhases::theta)
        .def("v", &RisPhases::v);

    py::class_<PowerConstraints>(m, "PowerConstraints")
        .def(py::init<RVector, double>(), py::arg("p"), py::arg("eta") = 1.0)
        .def_static("uniform", &PowerConstraints::uniform, py::arg("num_users"), py::arg("level"),
                    py::arg("eta") = 1.0)
        .def_readonly("p", &PowerConstraints::p)
        .def_readonly("eta", &PowerConstraints::eta);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("rho_x", &SolverConfig::rho_x)
        .def_readwrite("rho_psi", &SolverConfig::rho_psi)
        .def_readwrite("epsilon", &SolverConfig::epsilon)
        .def_readwrite("max_outer", &SolverConfig::max_outer)
        .def_readwrite("max_inner", &SolverConfig::max_inner)
        .def_readwrite("feasibility_tol", &SolverConfig::feasibility_tol)
        .def_readwrite("inner_stop_tol", &SolverConfig::inner_stop_tol)
        .def_readwrite("allow_infeasible_start", &SolverConfig::allow_infeasible_start);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("objective_trace", &SolveResult::objective_trace)
        .def_readonly("per_user_power", &SolveResult::per_user_power)
        .def_readonly("feasible", &SolveResult::feasible)
        .def_readonly("outer_iters", &SolveResult::outer_iters)
        .def_readonly("beamformer", &SolveResult::beamformer)
        .def_readonly("ris", &SolveResult::ris)
        .def_property_readonly("objective", &SolveResult::objective);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("M", &ScenarioConfig::M)
        .def_readwrite("K", &ScenarioConfig::K)
        .def_readwrite("N_l", &ScenarioConfig::N_l)
        .def_readwrite("carrier_freq", &ScenarioConfig::carrier_freq)
        .def_readwrite("tx_power", &ScenarioConfig::tx_power)
        .def_readwrite("rician_g", &ScenarioConfig::rician_g)
        .def_readwrite("rician_hr", &ScenarioConfig::rician_hr)
        .def_readwrite("pathloss_exp", &ScenarioConfig::pathloss_exp)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("user_group", &ScenarioConfig::user_group);

    m.def("compose_channel", &compose_channel);
    m.def("received_powers", &received_powers, py::arg("H"), py::arg("beamformer"),
          py::arg("eta") = 1.0);
    m.def("total_power", &total_power);
    m.def("check_feasibility", &check_feasibility, py::arg("Q"), py::arg("constraints"),
          py::arg("tol") = 1e-9);
    m.def("sca_bound_x", &sca_bound_x);
    m.def("spmc_sca_admm", &spmc_sca_admm, py::arg("channels"), py::arg("constraints"),
          py::arg("x0"), py::arg("ris0"), py::arg("config") = SolverConfig{});
    m.def("build_scenario", &build_scenario);
    m.def("steering_vector", &steering_vector);
    m.def("pathloss_gain", &pathloss_gain);
    m.def(
        "estimate_qmm",
        [](const ChannelSet& ch, const SolverConfig& cfg, double tol, double power) {
            return estimate_qmm(ch, cfg, tol, power);
        },
        py::arg("channels"), py::arg("config") = SolverConfig{}, py::arg("bisect_tol") = 0.02,
        py::arg("tx_power") = 1.0);
    m.def(
        "grid_search",
        [](const ChannelSet& ch, const PowerConstraints& pc, int levels, long long cap,
           double power) {
            GridSpec spec;
            spec.phase_levels = levels;
            spec.max_enumeration = cap;
            const auto r = grid_search(ch, pc, spec, power);
            return py::make_tuple(r.x_phases, r.ris_phases, r.objective, r.feasible);
        },
        py::arg("channels"), py::arg("constraints"), py::arg("phase_levels") = 8,
        py::arg("max_enumeration") = 5000000, py::arg("tx_power") = 1.0);
}
