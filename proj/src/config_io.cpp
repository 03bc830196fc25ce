#include "riswpt/config_io.hpp"

#include <fstream>
#include <set>

namespace riswpt {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw std::invalid_argument(what + ": unknown key '" + it.key() + "'");
}

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

json to_json(const ScenarioConfig& cfg) {
    json j{{"M", cfg.M},
           {"K", cfg.K},
           {"N_l", cfg.N_l},
           {"carrier_freq_hz", cfg.carrier_freq},
           {"tx_power_w", cfg.tx_power},
           {"rician_g", cfg.rician_g},
           {"rician_hr", cfg.rician_hr},
           {"pathloss_exp", cfg.pathloss_exp},
           {"distances", {{"d1", cfg.d1}, {"d2", cfg.d2}, {"d3", cfg.d3}, {"d4", cfg.d4}}},
           {"angles",
            {{"delta0", cfg.delta0}, {"delta1", cfg.delta1}, {"delta2", cfg.delta2}}},
           {"element_spacing", cfg.element_spacing},
           {"seed", cfg.seed}};
    if (!cfg.user_group.empty()) j["user_group"] = cfg.user_group;
    if (!cfg.blocked_links.empty()) {
        json b = json::array();
        for (const auto& [src, user] : cfg.blocked_links) b.push_back({src, user});
        j["blocked_links"] = b;
    }
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    reject_unknown(j,
                   {"M", "K", "N_l", "carrier_freq_hz", "tx_power_w", "rician_g", "rician_hr",
                    "pathloss_exp", "distances", "angles", "element_spacing", "user_group",
                    "blocked_links", "seed"},
                   "scenario");
    ScenarioConfig cfg;
    get_if_present(j, "M", cfg.M);
    get_if_present(j, "K", cfg.K);
    get_if_present(j, "N_l", cfg.N_l);
    get_if_present(j, "carrier_freq_hz", cfg.carrier_freq);
    get_if_present(j, "tx_power_w", cfg.tx_power);
    get_if_present(j, "rician_g", cfg.rician_g);
    get_if_present(j, "rician_hr", cfg.rician_hr);
    get_if_present(j, "pathloss_exp", cfg.pathloss_exp);
    if (j.contains("distances")) {
        const auto& d = j.at("distances");
        reject_unknown(d, {"d1", "d2", "d3", "d4"}, "scenario.distances");
        get_if_present(d, "d1", cfg.d1);
        get_if_present(d, "d2", cfg.d2);
        get_if_present(d, "d3", cfg.d3);
        get_if_present(d, "d4", cfg.d4);
    }
    if (j.contains("angles")) {
        const auto& a = j.at("angles");
        reject_unknown(a, {"delta0", "delta1", "delta2"}, "scenario.angles");
        get_if_present(a, "delta0", cfg.delta0);
        get_if_present(a, "delta1", cfg.delta1);
        get_if_present(a, "delta2", cfg.delta2);
    }
    get_if_present(j, "element_spacing", cfg.element_spacing);
    get_if_present(j, "user_group", cfg.user_group);
    if (j.contains("blocked_links")) {
        cfg.blocked_links.clear();
        for (const auto& e : j.at("blocked_links"))
            cfg.blocked_links.emplace_back(e.at(0).get<std::string>(), e.at(1).get<int>());
    }
    get_if_present(j, "seed", cfg.seed);
    cfg.validate();
    return cfg;
}

json to_json(const SolverConfig& cfg) {
    return {{"rho_x", cfg.rho_x},
            {"rho_psi", cfg.rho_psi},
            {"epsilon", cfg.epsilon},
            {"max_outer", cfg.max_outer},
            {"max_inner", cfg.max_inner},
            {"feasibility_tol", cfg.feasibility_tol},
            {"inner_stop_tol", cfg.inner_stop_tol},
            {"allow_infeasible_start", cfg.allow_infeasible_start}};
}

SolverConfig solver_from_json(const json& j) {
    reject_unknown(j,
                   {"rho_x", "rho_psi", "epsilon", "max_outer", "max_inner", "feasibility_tol",
                    "inner_stop_tol", "allow_infeasible_start"},
                   "solver");
    SolverConfig cfg;
    get_if_present(j, "rho_x", cfg.rho_x);
    get_if_present(j, "rho_psi", cfg.rho_psi);
    get_if_present(j, "epsilon", cfg.epsilon);
    get_if_present(j, "max_outer", cfg.max_outer);
    get_if_present(j, "max_inner", cfg.max_inner);
    get_if_present(j, "feasibility_tol", cfg.feasibility_tol);
    get_if_present(j, "inner_stop_tol", cfg.inner_stop_tol);
    get_if_present(j, "allow_infeasible_start", cfg.allow_infeasible_start);
    cfg.validate();
    return cfg;
}

namespace {

const char* kind_name(SweepKind k) {
    switch (k) {
    case SweepKind::antennas: return "antennas";
    case SweepKind::gamma: return "gamma";
    case SweepKind::ris_elements: return "ris_elements";
    }
    return "antennas";
}

const char* mode_name(RisMode m) {
    switch (m) {
    case RisMode::absent: return "absent";
    case RisMode::random_fixed: return "random_fixed";
    case RisMode::optimized: return "optimized";
    }
    return "optimized";
}

SweepKind kind_from(const std::string& s) {
    if (s == "antennas") return SweepKind::antennas;
    if (s == "gamma") return SweepKind::gamma;
    if (s == "ris_elements") return SweepKind::ris_elements;
    throw std::invalid_argument("sweep: unknown kind '" + s + "'");
}

RisMode mode_from(const std::string& s) {
    if (s == "absent") return RisMode::absent;
    if (s == "random_fixed") return RisMode::random_fixed;
    if (s == "optimized") return RisMode::optimized;
    throw std::invalid_argument("sweep: unknown ris_mode '" + s + "'");
}

} // namespace

json to_json(const SweepSpec& spec) {
    return {{"sweep", kind_name(spec.kind)},
            {"values", spec.values},
            {"ris_mode", mode_name(spec.ris_mode)},
            {"num_seeds", spec.num_seeds},
            {"qmm_bisect_tol", spec.qmm_bisect_tol},
            {"scenario", to_json(spec.scenario)},
            {"solver", to_json(spec.solver)}};
}

SweepSpec sweep_from_json(const json& j) {
    reject_unknown(
        j, {"sweep", "values", "ris_mode", "num_seeds", "qmm_bisect_tol", "scenario", "solver"},
        "sweep");
    SweepSpec spec;
    spec.kind = kind_from(j.at("sweep").get<std::string>());
    spec.values = j.at("values").get<std::vector<double>>();
    if (j.contains("ris_mode")) spec.ris_mode = mode_from(j.at("ris_mode").get<std::string>());
    get_if_present(j, "num_seeds", spec.num_seeds);
    get_if_present(j, "qmm_bisect_tol", spec.qmm_bisect_tol);
    if (j.contains("scenario")) spec.scenario = scenario_from_json(j.at("scenario"));
    if (j.contains("solver")) spec.solver = solver_from_json(j.at("solver"));
    spec.validate();
    return spec;
}

namespace {

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json j;
    in >> j;
    return j;
}

} // namespace

ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_json(load_file(path));
}

SweepSpec load_sweep(const std::string& path) { return sweep_from_json(load_file(path)); }

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

} // namespace riswpt
