#pragma once

#include "riswpt/types.hpp"

namespace riswpt {

/// Effective K x M channel H = H_r * diag(exp(j*theta)) * G + H_d.
CMatrix compose_channel(const ChannelSet& channels, const RisPhases& ris);

/// Received power per user, Q_k = eta * |h_k^H x|^2 with h_k^H the k-th
/// row of H.
RVector received_powers(const CMatrix& H, const TxBeamformer& beamformer, double eta = 1.0);

/// Sum of per-user received powers.
double total_power(const RVector& Q);

/// Entry k is true iff Q_k >= p_k - tol.
std::vector<bool> check_feasibility(const RVector& Q, const PowerConstraints& constraints,
                                    double tol = 1e-9);

/// Linear minorant of ||Hx||^2 expanded at x_hat:
///   2*Re{x_hat^H H^H H x} - x_hat^H H^H H x_hat.
/// Always <= ||Hx||^2, with equality at x = x_hat.
double sca_bound_x(const CMatrix& H, const CVector& x_hat, const CVector& x);

/// Lifted quadratic form for the RIS block. l_k = [c_k; a_k] with
/// c_k = diag(conj(h_rk)) G x (h_rk^H the k-th row of H_r) and
/// a_k = h_dk^H x. L = sum_k l_k l_k^H is Hermitian PSD of rank <= K,
/// and for unit-modulus b = [v; 1], b^H L b = sum_k Q_k.
struct RisQuadratic {
    std::vector<CVector> l; // K vectors of length N+1
    CMatrix L;              // (N+1) x (N+1)
};
RisQuadratic build_ris_quadratic(const ChannelSet& channels, const TxBeamformer& beamformer);

} // namespace riswpt
