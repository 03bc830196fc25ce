#include "riswpt/oracle.hpp"

#include <cmath>
#include <limits>

namespace riswpt {

namespace {

double grid_phase(int idx, int levels) {
    return -kPi + 2.0 * kPi * static_cast<double>(idx) / static_cast<double>(levels);
}

// odometer increment; returns false when the counter wraps to all zeros
bool advance(std::vector<int>& idx, int levels) {
    for (size_t i = 0; i < idx.size(); ++i) {
        if (++idx[i] < levels) return true;
        idx[i] = 0;
    }
    return false;
}

} // namespace

GridResult grid_search(const ChannelSet& channels, const PowerConstraints& constraints,
                       const GridSpec& spec, double tx_power) {
    if (spec.phase_levels < 2)
        throw std::invalid_argument("grid_search: phase_levels must be >= 2");
    const int M = channels.num_antennas();
    const int N = channels.num_elements();
    const int K = channels.num_users();

    double log_points = (M + N) * std::log(static_cast<double>(spec.phase_levels));
    if (log_points > std::log(static_cast<double>(spec.max_enumeration)))
        throw std::invalid_argument(
            "grid_search: enumeration of " + std::to_string(spec.phase_levels) + "^" +
            std::to_string(M + N) + " points exceeds cap " +
            std::to_string(spec.max_enumeration));

    GridResult best;
    best.objective = -1.0;
    double best_violation = std::numeric_limits<double>::infinity();
    GridResult least_violating;

    const double amp = std::sqrt(tx_power / static_cast<double>(M));
    std::vector<int> xi(M, 0);
    do {
        RVector alpha(M);
        CVector x(M);
        for (int m = 0; m < M; ++m) {
            alpha[m] = grid_phase(xi[m], spec.phase_levels);
            x[m] = std::polar(amp, alpha[m]);
        }
        // per-user direct term and per-element reflected contributions
        CVector direct(K);
        CMatrix refl(K, N);
        const CVector Gx = channels.G * x;
        for (int k = 0; k < K; ++k) {
            direct[k] = (channels.H_d.row(k) * x)(0);
            for (int n = 0; n < N; ++n)
                refl(k, n) = channels.H_r(k, n) * Gx[n];
        }

        std::vector<int> ti(N, 0);
        do {
            RVector theta(N);
            CVector psi(N);
            for (int n = 0; n < N; ++n) {
                theta[n] = grid_phase(ti[n], spec.phase_levels);
                psi[n] = std::polar(1.0, theta[n]);
            }
            double obj = 0.0;
            double violation = 0.0;
            for (int k = 0; k < K; ++k) {
                Complex y = direct[k];
                for (int n = 0; n < N; ++n) y += refl(k, n) * psi[n];
                const double q = constraints.eta * std::norm(y);
                obj += q;
                violation = std::max(violation, constraints.p[k] - q);
            }
            if (violation <= 0.0) {
                if (obj > best.objective) {
                    best.x_phases = alpha;
                    best.ris_phases = theta;
                    best.objective = obj;
                    best.feasible = true;
                }
            } else if (violation < best_violation) {
                best_violation = violation;
                least_violating.x_phases = alpha;
                least_violating.ris_phases = theta;
                least_violating.objective = obj;
            }
        } while (advance(ti, spec.phase_levels));
    } while (advance(xi, spec.phase_levels));

    if (best.feasible) return best;
    least_violating.feasible = false;
    return least_violating;
}

namespace {

// One continuation trial: solve at uniform level q starting from the
// witness (relaxed start, feasibility judged on the output). Falls back
// to a few deterministic random restarts before declaring the level
// unachievable.
bool achievable(const ChannelSet& channels, const SolverConfig& base, double q, double eta,
                QmmEstimate& est, int trial_id) {
    SolverConfig cfg = base;
    cfg.allow_infeasible_start = true;
    const auto constraints = PowerConstraints::uniform(channels.num_users(), q, eta);

    auto try_start = [&](const TxBeamformer& x0, const RisPhases& r0) {
        SolveResult sol = spmc_sca_admm(channels, constraints, x0, r0, cfg);
        const double achieved = sol.per_user_power.size() ? sol.per_user_power.minCoeff() : 0.0;
        if (sol.all_feasible() && achieved >= q - base.feasibility_tol) {
            // the witness certifies the level it actually achieves
            if (achieved > est.q) {
                est.q = achieved;
                est.witness = std::move(sol);
            }
            return true;
        }
        return false;
    };

    if (try_start(est.witness.beamformer, est.witness.ris)) return true;
    const int M = channels.num_antennas();
    const int N = channels.num_elements();
    for (int r = 0; r < 3; ++r) {
        LinkRng rng(static_cast<std::uint64_t>(trial_id), "qmm_retry:" + std::to_string(r));
        RVector alpha(M), theta(N);
        for (int m = 0; m < M; ++m) alpha[m] = rng.uniform_angle();
        for (int n = 0; n < N; ++n) theta[n] = rng.uniform_angle();
        if (try_start(TxBeamformer(alpha, est.witness.beamformer.power), RisPhases(theta)))
            return true;
    }
    return false;
}

} // namespace

QmmEstimate estimate_qmm_witness(const ChannelSet& channels, const SolverConfig& config,
                                 double bisect_tol, double tx_power) {
    if (bisect_tol <= 0.0) throw std::invalid_argument("estimate_qmm: bisect_tol must be > 0");
    const int K = channels.num_users();
    const int M = channels.num_antennas();
    const int N = channels.num_elements();
    const double eta = 1.0;

    // unconstrained warm solution
    const TxBeamformer x0(RVector::Zero(M), tx_power);
    const auto p0 = PowerConstraints::uniform(K, 0.0, eta);
    SolveResult sol0 = spmc_sca_admm(channels, p0, x0, RisPhases(RVector::Zero(N)), config);

    QmmEstimate est;
    est.witness = std::move(sol0);
    est.q = est.witness.per_user_power.minCoeff();

    double lo = est.q;
    double hi = std::max(est.witness.per_user_power.maxCoeff(), lo);
    if (hi <= 0.0) return est; // dead channels, nothing to bracket

    // expand the bracket until a level is unachievable
    int trial = 0;
    int guard = 0;
    while (hi <= lo * (1.0 + bisect_tol) && guard++ < 8) hi *= 2.0;
    guard = 0;
    while (achievable(channels, config, hi, eta, est, trial++) && guard++ < 60) {
        lo = hi;
        hi *= 2.0;
    }

    for (int it = 0; it < 100; ++it) {
        if (hi - lo <= bisect_tol * std::max(hi, std::numeric_limits<double>::min())) break;
        const double mid = 0.5 * (lo + hi);
        if (achievable(channels, config, mid, eta, est, trial++))
            lo = mid;
        else
            hi = mid;
    }
    return est;
}

double estimate_qmm(const ChannelSet& channels, const SolverConfig& config, double bisect_tol,
                    double tx_power) {
    return estimate_qmm_witness(channels, config, bisect_tol, tx_power).q;
}

double projection_oracle(const CVector& z, const CVector& h, double p, int samples, LinkRng& rng) {
    if (samples < 1) throw std::invalid_argument("projection_oracle: samples must be >= 1");
    const Complex hz = h.dot(z);
    if (std::norm(hz) >= p) return 0.0;
    const double h_norm2 = h.squaredNorm();
    if (h_norm2 == 0.0)
        throw InfeasibleError("projection_oracle: h = 0 with positive power requirement");
    const double sqrt_p = std::sqrt(p);

    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        const double nu = rng.uniform_angle();
        // random component orthogonal to h
        CVector q(z.size());
        for (Eigen::Index i = 0; i < q.size(); ++i)
            q[i] = rng.complex_gaussian();
        q -= (h.dot(q) / h_norm2) * h;
        const CVector base = z + q * rng.gaussian();
        // pin the constraint value to sqrt(p)*exp(j*nu)
        const Complex target = std::polar(sqrt_p, nu);
        const CVector e = base + ((target - h.dot(base)) / h_norm2) * h;
        best = std::min(best, (e - z).norm());
    }
    return best;
}

} // namespace riswpt
