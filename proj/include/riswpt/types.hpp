#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace riswpt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

constexpr double kPi = 3.141592653589793238462643383279502884;

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
}

/// Static channel matrices of one scenario realization.
///
/// H_d is the direct BS-to-user channel (K x M), H_r the RIS-to-user
/// channel (K x N), S the BS-to-RIS channel (N x M). G = diag(beta) * S
/// folds the fixed reflection amplitudes into the BS-RIS link and is
/// materialized once at construction.
struct ChannelSet {
    CMatrix H_d;               // K x M
    CMatrix H_r;               // K x N
    CMatrix S;                 // N x M
    RVector beta;              // length N, entries in [0,1]
    CMatrix G;                 // N x M, = diag(beta) * S
    std::vector<int> sections; // N_l per RIS, sums to N

    ChannelSet() = default;
    ChannelSet(CMatrix Hd, CMatrix Hr, CMatrix S_in, RVector beta_in,
               std::vector<int> sections_in = {});

    int num_users() const { return static_cast<int>(H_d.rows()); }
    int num_antennas() const { return static_cast<int>(H_d.cols()); }
    int num_elements() const { return static_cast<int>(H_r.cols()); }
};

/// Constant-envelope transmit beamformer: per-antenna phases and the
/// total power budget. x_m = sqrt(P/M) * exp(j*alpha_m).
struct TxBeamformer {
    RVector alpha; // length M, entries in [-pi, pi)
    double power = 1.0;

    TxBeamformer() = default;
    TxBeamformer(RVector alpha_in, double power_in);

    int size() const { return static_cast<int>(alpha.size()); }

    /// The complex weight vector x with |x_m| = sqrt(P/M).
    CVector weights() const;
};

/// RIS phase-shift vector. Convention: v_n = exp(-j*theta_n) and the
/// effective reflection diagonal is Psi_nn = exp(+j*theta_n) = conj(v_n).
struct RisPhases {
    RVector theta; // length N, entries in [-pi, pi)

    RisPhases() = default;
    explicit RisPhases(RVector theta_in);

    int size() const { return static_cast<int>(theta.size()); }

    CVector v() const; // v_n = exp(-j*theta_n)
};

/// Per-user minimum received power levels and conversion efficiency.
struct PowerConstraints {
    RVector p;        // length K, watts, each >= 0
    double eta = 1.0; // in [0,1]

    PowerConstraints() = default;
    PowerConstraints(RVector p_in, double eta_in = 1.0);

    static PowerConstraints uniform(int num_users, double level, double eta_in = 1.0);
};

/// Output of one solver run. objective_trace holds the incumbent
/// objective after each outer iteration and is non-decreasing by the
/// best-iterate safeguard.
struct SolveResult {
    std::vector<double> objective_trace;
    RVector per_user_power;
    std::vector<bool> feasible;
    int outer_iters = 0;
    long inner_iters_x = 0;
    long inner_iters_psi = 0;
    TxBeamformer beamformer;
    RisPhases ris;

    double objective() const {
        return objective_trace.empty() ? 0.0 : objective_trace.back();
    }
    bool all_feasible() const {
        for (bool f : feasible)
            if (!f) return false;
        return true;
    }
};

} // namespace riswpt
