#include "riswpt/config_io.hpp"
#include "riswpt/model.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace riswpt;

int cmd_solve(const std::string& config_path, std::int64_t seed_override, double min_power) {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.validate();

    const ChannelSet channels = build_scenario(cfg);
    const SolverConfig solver;
    const auto constraints = PowerConstraints::uniform(cfg.K, min_power);
    const TxBeamformer x0(RVector::Zero(cfg.M), cfg.tx_power);
    const RisPhases ris0(RVector::Zero(channels.num_elements()));

    SolveResult sol;
    try {
        sol = spmc_sca_admm(channels, constraints, x0, ris0, solver);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 1;
    }

    std::printf("seed            : %llu\n", static_cast<unsigned long long>(cfg.seed));
    std::printf("outer iterations: %d\n", sol.outer_iters);
    std::printf("inner iterations: %ld (x) + %ld (psi)\n", sol.inner_iters_x,
                sol.inner_iters_psi);
    std::printf("total power     : %.6e W\n", sol.objective());
    std::printf("min user power  : %.6e W\n", sol.per_user_power.minCoeff());
    for (Eigen::Index k = 0; k < sol.per_user_power.size(); ++k)
        std::printf("  user %2lld: %.6e W %s\n", static_cast<long long>(k),
                    sol.per_user_power[k], sol.feasible[k] ? "" : "(infeasible)");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& format, int jobs) {
    const SweepSpec spec = load_sweep(config_path);
    const auto rows = run_sweep(spec, jobs);
    const OutputFormat fmt = format == "json" ? OutputFormat::json : OutputFormat::csv;
    emit_results(rows, out_path, fmt);
    std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
    return 0;
}

int cmd_oracle(const std::string& config_path, std::int64_t seed_override, int levels,
               long long max_enum, double min_power) {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.validate();

    const ChannelSet channels = build_scenario(cfg);
    GridSpec grid;
    grid.phase_levels = levels;
    grid.max_enumeration = max_enum;
    const auto constraints = PowerConstraints::uniform(cfg.K, min_power);
    const GridResult best = grid_search(channels, constraints, grid, cfg.tx_power);

    std::printf("grid levels     : %d\n", levels);
    std::printf("feasible        : %s\n", best.feasible ? "true" : "false");
    std::printf("best objective  : %.6e W\n", best.objective);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided constant-envelope wireless power transfer solver"};
    app.require_subcommand(1);

    std::string config_path, out_path = "results.csv", format = "csv";
    std::int64_t seed = -1;
    int jobs = 1, levels = 8;
    long long max_enum = 5000000;
    double min_power = 0.0;

    auto* solve = app.add_subcommand("solve", "solve a single scenario");
    solve->add_option("--config", config_path, "scenario config (JSON)");
    solve->add_option("--seed", seed, "override the scenario seed");
    solve->add_option("--min-power", min_power, "uniform per-user minimum power (W)");

    auto* sweep = app.add_subcommand("sweep", "run a sweep spec");
    sweep->add_option("--config", config_path, "sweep spec (JSON)")->required();
    sweep->add_option("--out", out_path, "output path");
    sweep->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--jobs", jobs, "parallel workers");

    auto* oracle = app.add_subcommand("oracle", "grid-search a tiny instance");
    oracle->add_option("--config", config_path, "scenario config (JSON)");
    oracle->add_option("--seed", seed, "override the scenario seed");
    oracle->add_option("--levels", levels, "phase quantization levels");
    oracle->add_option("--max-enum", max_enum, "enumeration cap");
    oracle->add_option("--min-power", min_power, "uniform per-user minimum power (W)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(config_path, seed, min_power);
        if (sweep->parsed()) return cmd_sweep(config_path, out_path, format, jobs);
        if (oracle->parsed()) return cmd_oracle(config_path, seed, levels, max_enum, min_power);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
