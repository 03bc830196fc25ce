#include "riswpt/solver.hpp"

#include <cmath>
#include <limits>

namespace riswpt {

namespace {

// Constant-envelope projection: amp * exp(j*arg(w)), phase 0 for w == 0.
CVector phase_project(const CVector& w, double amp) {
    CVector out(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] == Complex(0.0, 0.0))
            out[i] = Complex(amp, 0.0);
        else
            out[i] = std::polar(amp, std::arg(w[i]));
    }
    return out;
}

CVector admm_drive(const AdmmWorkspace& ws) {
    CVector s = CVector::Zero(ws.global.size());
    for (size_t k = 0; k < ws.locals.size(); ++k)
        s += ws.duals[k] + ws.locals[k];
    return 2.0 * ws.rho * s;
}

// The penalty is specified as a dimensionless multiplier; the effective
// rho is tied to the curvature scale of the block so that the linear
// drive term and the consensus term stay balanced regardless of the
// absolute channel magnitude (watt-scale channels would otherwise stall
// the global update).
double scaled_rho(double rho_cfg, double curvature_norm, int num_users) {
    const double scale = curvature_norm / (2.0 * std::max(num_users, 1));
    return rho_cfg * (scale > 0.0 ? scale : 1.0);
}

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
};

Residuals consensus_residuals(const AdmmWorkspace& ws, const CVector& global_prev) {
    Residuals r;
    for (const auto& e : ws.locals)
        r.primal = std::max(r.primal, (e - ws.global).norm());
    r.dual = (ws.global - global_prev).norm();
    return r;
}

} // namespace

AdmmWorkspace AdmmWorkspace::consensus_start(const CVector& global_init, int num_users,
                                             double rho_in) {
    AdmmWorkspace ws;
    ws.global = global_init;
    ws.locals.assign(num_users, global_init);
    ws.duals.assign(num_users, CVector::Zero(global_init.size()));
    ws.rho = rho_in;
    return ws;
}

void SolverConfig::validate() const {
    if (rho_x <= 0.0 || rho_psi <= 0.0) throw std::invalid_argument("penalty must be positive");
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (max_outer <= 0 || max_inner <= 0)
        throw std::invalid_argument("iteration limits must be positive");
    if (feasibility_tol < 0.0) throw std::invalid_argument("feasibility_tol must be >= 0");
    if (inner_stop_tol <= 0.0) throw std::invalid_argument("inner_stop_tol must be positive");
}

CVector update_x(const CMatrix& H, const CVector& x_hat, const AdmmWorkspace& ws, double power) {
    if (ws.rho <= 0.0) throw std::invalid_argument("update_x: rho must be positive");
    const CVector w = H.adjoint() * (H * x_hat) + admm_drive(ws);
    const double amp = std::sqrt(power / static_cast<double>(x_hat.size()));
    return phase_project(w, amp);
}

CVector project_min_power(const CVector& z, const CVector& h, double p) {
    if (p <= 0.0) return z;
    const double h_norm2 = h.squaredNorm();
    if (h_norm2 == 0.0)
        throw InfeasibleError("project_min_power: h = 0 with positive power requirement");
    const Complex hz = h.dot(z); // h^H z
    const double mag = std::abs(hz);
    const double sqrt_p = std::sqrt(p);
    if (mag * mag >= p) return z;
    if (mag == 0.0) {
        // any boundary phase is equidistant; take nu = 0
        return z + (sqrt_p / h_norm2) * h;
    }
    return z + ((sqrt_p - mag) / (h_norm2 * mag)) * (h * hz);
}

void update_duals(AdmmWorkspace& ws) {
    for (size_t k = 0; k < ws.duals.size(); ++k)
        ws.duals[k] += ws.locals[k] - ws.global;
}

namespace {

// Shared inner loop for both blocks. `drive_fixed` is the linear term of
// the global update (H^H H x_hat or L b_hat), `amp` the constant modulus.
CVector consensus_admm(const CVector& drive_fixed, const std::vector<CVector>& h_vectors,
                       const RVector& p, const CVector& global_init, double amp, double rho,
                       const SolverConfig& config, long* iters) {
    const int K = static_cast<int>(h_vectors.size());
    AdmmWorkspace ws = AdmmWorkspace::consensus_start(global_init, K, rho);
    const double stop = config.inner_stop_tol * std::sqrt(static_cast<double>(global_init.size()));

    long t = 0;
    for (; t < config.max_inner; ++t) {
        const CVector global_prev = ws.global;
        ws.global = phase_project(drive_fixed + admm_drive(ws), amp);
        for (int k = 0; k < K; ++k)
            ws.locals[k] = project_min_power(ws.global - ws.duals[k], h_vectors[k], p[k]);
        update_duals(ws);
        const Residuals r = consensus_residuals(ws, global_prev);
        if (r.primal < stop && r.dual < stop) {
            ++t;
            break;
        }
    }
    if (iters) *iters += t;
    return ws.global;
}

} // namespace

CVector admm_x_block(const CMatrix& H, const CVector& x_init, const PowerConstraints& constraints,
                     const SolverConfig& config, double power, long* iters) {
    const int K = static_cast<int>(H.rows());
    const Eigen::Index M = H.cols();
    if (x_init.size() != M) throw std::invalid_argument("admm_x_block: x_init length mismatch");
    if (constraints.p.size() != K)
        throw std::invalid_argument("admm_x_block: constraint length mismatch");

    std::vector<CVector> h(K);
    for (int k = 0; k < K; ++k) h[k] = H.row(k).adjoint();

    // eta scales the received power, so the projection level is p/eta
    RVector p_eff = constraints.p;
    if (constraints.eta > 0.0)
        p_eff /= constraints.eta;
    else
        for (Eigen::Index k = 0; k < p_eff.size(); ++k)
            if (p_eff[k] > 0.0)
                throw InfeasibleError("admm_x_block: eta = 0 with positive power requirement");

    const CMatrix HtH = H.adjoint() * H;
    const double rho = scaled_rho(config.rho_x, HtH.norm(), K);
    const CVector drive = HtH * x_init;
    const double amp = std::sqrt(power / static_cast<double>(M));
    return consensus_admm(drive, h, p_eff, x_init, amp, rho, config, iters);
}

CVector update_b(const CMatrix& L, const CVector& b_hat, const AdmmWorkspace& ws) {
    if (ws.rho <= 0.0) throw std::invalid_argument("update_b: rho must be positive");
    const CVector w = L * b_hat + admm_drive(ws);
    return phase_project(w, 1.0);
}

CVector admm_psi_block(const RisQuadratic& quad, const CVector& b_init,
                       const PowerConstraints& constraints, const SolverConfig& config,
                       long* iters) {
    const int K = static_cast<int>(quad.l.size());
    if (constraints.p.size() != K)
        throw std::invalid_argument("admm_psi_block: constraint length mismatch");
    if (b_init.size() != quad.L.rows())
        throw std::invalid_argument("admm_psi_block: b_init length mismatch");

    RVector p_eff = constraints.p;
    if (constraints.eta > 0.0)
        p_eff /= constraints.eta;
    else
        for (Eigen::Index k = 0; k < p_eff.size(); ++k)
            if (p_eff[k] > 0.0)
                throw InfeasibleError("admm_psi_block: eta = 0 with positive power requirement");

    const double rho = scaled_rho(config.rho_psi, quad.L.norm(), K);
    const CVector drive = quad.L * b_init;
    return consensus_admm(drive, quad.l, p_eff, b_init, 1.0, rho, config, iters);
}

RisPhases recover_ris_phases(const CVector& b) {
    const Eigen::Index N = b.size() - 1;
    if (N < 0) throw std::invalid_argument("recover_ris_phases: b must have length >= 1");
    if (b[N] == Complex(0.0, 0.0))
        throw std::invalid_argument("recover_ris_phases: reference entry is zero");
    RVector theta(N);
    for (Eigen::Index n = 0; n < N; ++n)
        theta[n] = wrap_angle(-std::arg(b[n] / b[N]));
    return RisPhases(std::move(theta));
}

namespace {

struct Incumbent {
    TxBeamformer x;
    RisPhases ris;
    RVector Q;
    double objective = -std::numeric_limits<double>::infinity();
    bool feasible = false;
};

bool is_feasible(const RVector& Q, const PowerConstraints& constraints, double tol) {
    for (Eigen::Index k = 0; k < Q.size(); ++k)
        if (Q[k] < constraints.p[k] - tol) return false;
    return true;
}

TxBeamformer beamformer_from_weights(const CVector& x, double power) {
    RVector alpha(x.size());
    for (Eigen::Index m = 0; m < x.size(); ++m) alpha[m] = std::arg(x[m]);
    return TxBeamformer(std::move(alpha), power);
}

// Accepts the candidate iff feasible and strictly better.
void consider(Incumbent& inc, const TxBeamformer& x, const RisPhases& ris, const RVector& Q,
              const PowerConstraints& constraints, double tol) {
    const double obj = Q.sum();
    const bool feas = is_feasible(Q, constraints, tol);
    if (!feas) return;
    if (!inc.feasible || obj > inc.objective) {
        inc.x = x;
        inc.ris = ris;
        inc.Q = Q;
        inc.objective = obj;
        inc.feasible = true;
    }
}

} // namespace

SolveResult spmc_sca_admm(const ChannelSet& channels, const PowerConstraints& constraints,
                          const TxBeamformer& x0, const RisPhases& ris0,
                          const SolverConfig& config) {
    config.validate();
    const int K = channels.num_users();
    const int N = channels.num_elements();
    if (x0.size() != channels.num_antennas())
        throw std::invalid_argument("spmc_sca_admm: beamformer length mismatch");
    if (ris0.size() != N) throw std::invalid_argument("spmc_sca_admm: theta length mismatch");
    if (constraints.p.size() != K)
        throw std::invalid_argument("spmc_sca_admm: constraint length mismatch");

    Incumbent inc;
    inc.x = x0;
    inc.ris = ris0;
    {
        const CMatrix H0 = compose_channel(channels, ris0);
        inc.Q = received_powers(H0, x0, constraints.eta);
        inc.objective = inc.Q.sum();
        inc.feasible = is_feasible(inc.Q, constraints, config.feasibility_tol);
    }
    if (!inc.feasible && !config.allow_infeasible_start)
        throw InfeasibleError("spmc_sca_admm: infeasible starting point");

    // Working point for the blocks. While no feasible iterate exists it
    // follows the raw block output so the projections can pull toward the
    // constraint set; once feasible it tracks the incumbent (safeguard).
    TxBeamformer cur_x = x0;
    RisPhases cur_ris = ris0;

    SolveResult result;
    double prev_obj = inc.feasible ? inc.objective : 0.0;

    for (int i = 0; i < config.max_outer; ++i) {
        // transmit block, RIS state frozen
        const CMatrix H = compose_channel(channels, cur_ris);
        const CVector x_new = admm_x_block(H, cur_x.weights(), constraints, config, cur_x.power,
                                           &result.inner_iters_x);
        const TxBeamformer cand_x = beamformer_from_weights(x_new, cur_x.power);
        consider(inc, cand_x, cur_ris, received_powers(H, cand_x, constraints.eta), constraints,
                 config.feasibility_tol);
        cur_x = inc.feasible ? inc.x : cand_x;
        if (inc.feasible) cur_ris = inc.ris;

        // RIS block, transmit phases frozen
        if (N > 0) {
            const RisQuadratic quad = build_ris_quadratic(channels, cur_x);
            CVector b_hat(N + 1);
            b_hat.head(N) = cur_ris.v();
            b_hat[N] = Complex(1.0, 0.0);
            const CVector b_new =
                admm_psi_block(quad, b_hat, constraints, config, &result.inner_iters_psi);
            const RisPhases cand_ris = recover_ris_phases(b_new);
            const CMatrix H2 = compose_channel(channels, cand_ris);
            consider(inc, cur_x, cand_ris, received_powers(H2, cur_x, constraints.eta),
                     constraints, config.feasibility_tol);
            cur_ris = inc.feasible ? inc.ris : cand_ris;
            if (inc.feasible) cur_x = inc.x;
        }

        const double obj = inc.feasible ? inc.objective : 0.0;
        result.objective_trace.push_back(obj);
        result.outer_iters = i + 1;

        const double denom = std::max(std::abs(prev_obj), std::numeric_limits<double>::min());
        if (inc.feasible && obj - prev_obj < config.epsilon * denom && i > 0) break;
        prev_obj = obj;
    }

    result.beamformer = inc.x;
    result.ris = inc.ris;
    result.per_user_power = inc.Q;
    result.feasible = check_feasibility(inc.Q, constraints, config.feasibility_tol);
    return result;
}

SolveResult solve_x_only(const CMatrix& H, const PowerConstraints& constraints,
                         const TxBeamformer& x0, const SolverConfig& config) {
    config.validate();
    if (x0.size() != H.cols()) throw std::invalid_argument("solve_x_only: beamformer mismatch");

    Incumbent inc;
    inc.x = x0;
    inc.Q = received_powers(H, x0, constraints.eta);
    inc.objective = inc.Q.sum();
    inc.feasible = is_feasible(inc.Q, constraints, config.feasibility_tol);
    if (!inc.feasible && !config.allow_infeasible_start)
        throw InfeasibleError("solve_x_only: infeasible starting point");

    SolveResult result;
    double prev_obj = inc.feasible ? inc.objective : 0.0;

    TxBeamformer cur_x = x0;

    for (int i = 0; i < config.max_outer; ++i) {
        const CVector x_new = admm_x_block(H, cur_x.weights(), constraints, config, cur_x.power,
                                           &result.inner_iters_x);
        const TxBeamformer cand_x = beamformer_from_weights(x_new, cur_x.power);
        consider(inc, cand_x, inc.ris, received_powers(H, cand_x, constraints.eta), constraints,
                 config.feasibility_tol);
        cur_x = inc.feasible ? inc.x : cand_x;

        const double obj = inc.feasible ? inc.objective : 0.0;
        result.objective_trace.push_back(obj);
        result.outer_iters = i + 1;

        const double denom = std::max(std::abs(prev_obj), std::numeric_limits<double>::min());
        if (inc.feasible && obj - prev_obj < config.epsilon * denom && i > 0) break;
        prev_obj = obj;
    }

    result.beamformer = inc.x;
    result.ris = inc.ris;
    result.per_user_power = inc.Q;
    result.feasible = check_feasibility(inc.Q, constraints, config.feasibility_tol);
    return result;
}

} // namespace riswpt
