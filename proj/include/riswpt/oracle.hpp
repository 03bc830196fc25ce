#pragma once

#include "riswpt/channel.hpp"
#include "riswpt/solver.hpp"

namespace riswpt {

struct GridSpec {
    int phase_levels = 16;            // uniform grid over [-pi, pi)
    long long max_enumeration = 5000000;
};

struct GridResult {
    RVector x_phases;   // length M
    RVector ris_phases; // length N
    double objective = 0.0;
    bool feasible = false;
};

/// Exhaustive search over all quantized (alpha, theta) combinations.
/// Among feasible points (tol 0) returns the total-power maximizer; if
/// none is feasible, returns the point minimizing the worst constraint
/// violation with feasible = false.
GridResult grid_search(const ChannelSet& channels, const PowerConstraints& constraints,
                       const GridSpec& spec, double tx_power);

struct QmmEstimate {
    double q = 0.0;        // certified uniform power level
    SolveResult witness;   // solution achieving min_k Q_k >= q
};

/// Heuristic lower bound on the max-min received power: bisection over
/// the uniform level q, each trial solved by the SCA-ADMM solver with
/// continuation from the best witness so far. The returned level is the
/// minimum user power actually achieved by the witness.
QmmEstimate estimate_qmm_witness(const ChannelSet& channels, const SolverConfig& config,
                                 double bisect_tol, double tx_power = 1.0);
double estimate_qmm(const ChannelSet& channels, const SolverConfig& config, double bisect_tol,
                    double tx_power = 1.0);

/// Samples feasible points of |h^H e|^2 >= p (random boundary phase plus
/// random components orthogonal to h) and returns the minimum distance to
/// z found. The closed-form projection must never be farther than this.
double projection_oracle(const CVector& z, const CVector& h, double p, int samples, LinkRng& rng);

} // namespace riswpt
