#pragma once

#include "riswpt/oracle.hpp"

#include <string>

namespace riswpt {

enum class SweepKind { antennas, gamma, ris_elements };
enum class RisMode { absent, random_fixed, optimized };

struct SweepSpec {
    SweepKind kind = SweepKind::antennas;
    std::vector<double> values;
    RisMode ris_mode = RisMode::optimized;
    int num_seeds = 20;
    ScenarioConfig scenario;
    SolverConfig solver;
    double qmm_bisect_tol = 0.02; // gamma sweeps only

    void validate() const;
};

struct ResultRow {
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double total_power = 0.0;
    double min_user_power = 0.0;
    bool feasible = false;
    int outer_iters = 0;
    double wall_time = 0.0;
};

/// Runs every (sweep value, seed) combination; rows come back sorted by
/// sweep value then seed regardless of worker scheduling. An infeasible
/// gamma point yields a row with feasible = false, never a crash.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, int jobs = 1);

enum class OutputFormat { csv, json };

void emit_results(const std::vector<ResultRow>& rows, const std::string& path,
                  OutputFormat format);
std::vector<ResultRow> read_results(const std::string& path, OutputFormat format);

} // namespace riswpt
