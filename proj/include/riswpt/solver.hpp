#pragma once

#include "riswpt/model.hpp"

namespace riswpt {

/// Consensus ADMM state for one block. `global` is x (length M) or the
/// lifted b (length N+1); locals/duals are the per-user copies e_k and
/// scaled duals u_k.
struct AdmmWorkspace {
    CVector global;
    std::vector<CVector> locals;
    std::vector<CVector> duals;
    double rho = 1.0;

    /// Zero duals, locals equal to the global (zero initial residuals).
    static AdmmWorkspace consensus_start(const CVector& global_init, int num_users, double rho);
};

struct SolverConfig {
    double rho_x = 1.0;   // dimensionless; scaled by the block curvature
    double rho_psi = 1.0;
    double epsilon = 1e-4;        // outer fractional-improvement threshold
    int max_outer = 100;
    int max_inner = 500;
    double feasibility_tol = 1e-9;
    double inner_stop_tol = 1e-6; // multiplied by sqrt(vector length)
    bool allow_infeasible_start = false;

    void validate() const;
};

/// Raised when a minimum-power constraint cannot be met (h = 0 with p > 0)
/// or the solver is given an infeasible starting point.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form global update of the x block: the constant-envelope
/// maximizer of Re{w^H x} with w = H^H H x_hat + 2*rho*sum_k(u_k + e_k).
/// Entries of w that are exactly zero get phase 0.
CVector update_x(const CMatrix& H, const CVector& x_hat, const AdmmWorkspace& ws, double power);

/// Nearest point to z satisfying |h^H e|^2 >= p. Returns z unchanged when
/// already feasible; otherwise projects onto the boundary |h^H e| = sqrt(p).
CVector project_min_power(const CVector& z, const CVector& h, double p);

/// Scaled dual ascent: u_k += e_k - global, for every user.
void update_duals(AdmmWorkspace& ws);

/// Inner ADMM for the transmit block, with the SCA expansion point fixed
/// at x_init for the whole run. Returns the consensus iterate; the
/// iteration count taken is added to *iters when non-null.
CVector admm_x_block(const CMatrix& H, const CVector& x_init, const PowerConstraints& constraints,
                     const SolverConfig& config, double power, long* iters = nullptr);

/// Closed-form global update of the lifted RIS block.
CVector update_b(const CMatrix& L, const CVector& b_hat, const AdmmWorkspace& ws);

/// Inner ADMM for the RIS block (unit-modulus b of length N+1).
CVector admm_psi_block(const RisQuadratic& quad, const CVector& b_init,
                       const PowerConstraints& constraints, const SolverConfig& config,
                       long* iters = nullptr);

/// De-lifts b = [t*v; t] back to phases: v = b[0..N)/b[N], theta = -arg(v).
RisPhases recover_ris_phases(const CVector& b);

/// Alternating SCA-ADMM driver: x block, then RIS block, per outer
/// iteration, with a best-feasible-iterate safeguard so the reported
/// objective trace is non-decreasing.
SolveResult spmc_sca_admm(const ChannelSet& channels, const PowerConstraints& constraints,
                          const TxBeamformer& x0, const RisPhases& ris0,
                          const SolverConfig& config);

/// x-only variant used when the RIS state is fixed (or absent): the
/// effective channel H is composed once and only the transmit phases are
/// optimized, re-linearizing each outer iteration.
SolveResult solve_x_only(const CMatrix& H, const PowerConstraints& constraints,
                         const TxBeamformer& x0, const SolverConfig& config);

} // namespace riswpt
