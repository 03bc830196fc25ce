#include "riswpt/sweep.hpp"
#include "riswpt/model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

namespace riswpt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioConfig scenario_for(const SweepSpec& spec, double value, std::uint64_t seed) {
    ScenarioConfig cfg = spec.scenario;
    cfg.seed = seed;
    switch (spec.kind) {
    case SweepKind::antennas:
        cfg.M = static_cast<int>(value);
        break;
    case SweepKind::ris_elements: {
        const int n = static_cast<int>(value);
        if (n == 0) {
            cfg.N_l.clear();
        } else if (cfg.N_l.size() <= 1) {
            cfg.N_l = {n};
        } else {
            cfg.N_l = {n / 2, n - n / 2};
        }
        break;
    }
    case SweepKind::gamma:
        break;
    }
    return cfg;
}

ScenarioConfig without_ris(ScenarioConfig cfg) {
    cfg.N_l.clear();
    return cfg;
}

ResultRow evaluate_solution(const ChannelSet& channels, const SolveResult& sol,
                            const PowerConstraints& constraints, double tol) {
    // re-derive the powers from the raw (x, theta) rather than trusting
    // the solver's bookkeeping
    const CMatrix H = compose_channel(channels, sol.ris);
    const RVector Q = received_powers(H, sol.beamformer, constraints.eta);
    ResultRow row;
    row.total_power = Q.sum();
    row.min_user_power = Q.minCoeff();
    const auto ok = check_feasibility(Q, constraints, tol);
    row.feasible = std::all_of(ok.begin(), ok.end(), [](bool b) { return b; });
    row.outer_iters = sol.outer_iters;
    return row;
}

ResultRow run_point(const SweepSpec& spec, double value, std::uint64_t seed) {
    const auto t0 = Clock::now();
    ResultRow row;
    row.sweep_value = value;
    row.seed = seed;
    try {
        const ScenarioConfig scfg = scenario_for(spec, value, seed);
        const auto constraints = PowerConstraints::uniform(scfg.K, 0.0);
        const RisMode mode = spec.ris_mode;

        if (mode == RisMode::absent) {
            const ChannelSet channels = build_scenario(without_ris(scfg));
            const TxBeamformer x0(RVector::Zero(scfg.M), scfg.tx_power);
            const SolveResult sol =
                solve_x_only(channels.H_d, constraints, x0, spec.solver);
            row = evaluate_solution(channels, sol, constraints, spec.solver.feasibility_tol);
        } else if (mode == RisMode::random_fixed) {
            const ChannelSet channels = build_scenario(scfg);
            LinkRng rng(seed, "ris_random");
            RVector theta(channels.num_elements());
            for (Eigen::Index n = 0; n < theta.size(); ++n) theta[n] = rng.uniform_angle();
            const RisPhases ris(std::move(theta));
            const CMatrix H = compose_channel(channels, ris);
            const TxBeamformer x0(RVector::Zero(scfg.M), scfg.tx_power);
            SolveResult sol = solve_x_only(H, constraints, x0, spec.solver);
            sol.ris = ris;
            row = evaluate_solution(channels, sol, constraints, spec.solver.feasibility_tol);
        } else {
            const ChannelSet channels = build_scenario(scfg);
            const TxBeamformer x0(RVector::Zero(scfg.M), scfg.tx_power);
            const RisPhases ris0(RVector::Zero(channels.num_elements()));
            const SolveResult sol = spmc_sca_admm(channels, constraints, x0, ris0, spec.solver);
            row = evaluate_solution(channels, sol, constraints, spec.solver.feasibility_tol);
        }
    } catch (const InfeasibleError&) {
        row.feasible = false;
    }
    row.sweep_value = value;
    row.seed = seed;
    row.wall_time = elapsed_s(t0);
    return row;
}

// A gamma sweep shares one Q_MM estimate per seed across all gamma values.
std::vector<ResultRow> run_gamma_seed(const SweepSpec& spec, std::uint64_t seed) {
    ScenarioConfig scfg = spec.scenario;
    scfg.seed = seed;
    const ChannelSet channels = build_scenario(scfg);

    std::vector<ResultRow> rows;
    rows.reserve(spec.values.size());

    QmmEstimate est;
    bool have_est = false;
    try {
        est = estimate_qmm_witness(channels, spec.solver, spec.qmm_bisect_tol, scfg.tx_power);
        have_est = true;
    } catch (const InfeasibleError&) {
    }

    for (double gamma : spec.values) {
        const auto t0 = Clock::now();
        ResultRow row;
        row.sweep_value = gamma;
        row.seed = seed;
        if (have_est) {
            try {
                const auto constraints =
                    PowerConstraints::uniform(scfg.K, gamma * est.q);
                // the Q_MM witness is feasible for every gamma <= 1
                const SolveResult sol = spmc_sca_admm(channels, constraints,
                                                      est.witness.beamformer, est.witness.ris,
                                                      spec.solver);
                row = evaluate_solution(channels, sol, constraints, spec.solver.feasibility_tol);
                row.sweep_value = gamma;
                row.seed = seed;
            } catch (const InfeasibleError&) {
                row.feasible = false;
            }
        }
        row.wall_time = elapsed_s(t0);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("SweepSpec: values must be non-empty");
    if (num_seeds < 1) throw std::invalid_argument("SweepSpec: num_seeds must be >= 1");
    for (double v : values) {
        if (kind == SweepKind::gamma) {
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument("SweepSpec: gamma values must lie in [0,1]");
        } else {
            if (v < 0.0 || v != std::floor(v))
                throw std::invalid_argument("SweepSpec: sweep values must be non-negative integers");
            if (kind == SweepKind::antennas && v < 1.0)
                throw std::invalid_argument("SweepSpec: antenna counts must be positive");
        }
    }
    scenario.validate();
    solver.validate();
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs) {
    spec.validate();
    if (jobs < 1) jobs = 1;

    std::vector<std::vector<ResultRow>> slots;
    std::vector<std::function<std::vector<ResultRow>()>> tasks;

    if (spec.kind == SweepKind::gamma) {
        for (int s = 0; s < spec.num_seeds; ++s) {
            const std::uint64_t seed = spec.scenario.seed + static_cast<std::uint64_t>(s);
            tasks.emplace_back([&spec, seed] { return run_gamma_seed(spec, seed); });
        }
    } else {
        for (double v : spec.values)
            for (int s = 0; s < spec.num_seeds; ++s) {
                const std::uint64_t seed = spec.scenario.seed + static_cast<std::uint64_t>(s);
                tasks.emplace_back([&spec, v, seed] {
                    return std::vector<ResultRow>{run_point(spec, v, seed)};
                });
            }
    }

    slots.resize(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            slots[i] = tasks[i]();
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
        pool.reserve(n);
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<ResultRow> rows;
    for (auto& chunk : slots)
        rows.insert(rows.end(), chunk.begin(), chunk.end());
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
        return a.seed < b.seed;
    });
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void emit_results(const std::vector<ResultRow>& rows, const std::string& path,
                  OutputFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_results: cannot open '" + path + "' for writing");
    if (format == OutputFormat::csv) {
        out << "sweep_value,seed,total_power_w,min_user_power_w,feasible,outer_iters,wall_time_s\n";
        for (const auto& r : rows)
            out << format_double(r.sweep_value) << ',' << r.seed << ','
                << format_double(r.total_power) << ',' << format_double(r.min_user_power) << ','
                << (r.feasible ? "true" : "false") << ',' << r.outer_iters << ','
                << format_double(r.wall_time) << '\n';
    } else {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows)
            j.push_back({{"sweep_value", r.sweep_value},
                         {"seed", r.seed},
                         {"total_power_w", r.total_power},
                         {"min_user_power_w", r.min_user_power},
                         {"feasible", r.feasible},
                         {"outer_iters", r.outer_iters},
                         {"wall_time_s", r.wall_time}});
        out << j.dump(2) << '\n';
    }
    if (!out) throw std::runtime_error("emit_results: write to '" + path + "' failed");
}

std::vector<ResultRow> read_results(const std::string& path, OutputFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_results: cannot open '" + path + "'");
    std::vector<ResultRow> rows;
    if (format == OutputFormat::csv) {
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            ResultRow r;
            char feas[8] = {0};
            unsigned long long seed = 0;
            if (std::sscanf(line.c_str(), "%lf,%llu,%lf,%lf,%7[^,],%d,%lf", &r.sweep_value, &seed,
                            &r.total_power, &r.min_user_power, feas, &r.outer_iters,
                            &r.wall_time) != 7)
                throw std::runtime_error("read_results: malformed CSV line in '" + path + "'");
            r.seed = seed;
            r.feasible = std::string(feas) == "true";
            rows.push_back(r);
        }
    } else {
        nlohmann::json j;
        in >> j;
        for (const auto& e : j) {
            ResultRow r;
            r.sweep_value = e.at("sweep_value").get<double>();
            r.seed = e.at("seed").get<std::uint64_t>();
            r.total_power = e.at("total_power_w").get<double>();
            r.min_user_power = e.at("min_user_power_w").get<double>();
            r.feasible = e.at("feasible").get<bool>();
            r.outer_iters = e.at("outer_iters").get<int>();
            r.wall_time = e.at("wall_time_s").get<double>();
            rows.push_back(r);
        }
    }
    return rows;
}

} // namespace riswpt
