#include "riswpt/model.hpp"

#include <cmath>

namespace riswpt {

ChannelSet::ChannelSet(CMatrix Hd, CMatrix Hr, CMatrix S_in, RVector beta_in,
                       std::vector<int> sections_in)
    : H_d(std::move(Hd)), H_r(std::move(Hr)), S(std::move(S_in)), beta(std::move(beta_in)),
      sections(std::move(sections_in)) {
    const auto K = H_d.rows();
    const auto M = H_d.cols();
    const auto N = H_r.cols();
    if (H_r.rows() != K || S.rows() != N || S.cols() != M)
        throw std::invalid_argument("ChannelSet: inconsistent matrix dimensions");
    if (beta.size() != N)
        throw std::invalid_argument("ChannelSet: beta length must equal N");
    for (Eigen::Index n = 0; n < N; ++n)
        if (beta[n] < 0.0 || beta[n] > 1.0)
            throw std::invalid_argument("ChannelSet: beta entries must lie in [0,1]");
    if (sections.empty() && N > 0) sections = {static_cast<int>(N)};
    int total = 0;
    for (int nl : sections) total += nl;
    if (total != N) throw std::invalid_argument("ChannelSet: section sizes must sum to N");
    G = beta.asDiagonal() * S;
}

TxBeamformer::TxBeamformer(RVector alpha_in, double power_in)
    : alpha(std::move(alpha_in)), power(power_in) {
    if (power <= 0.0) throw std::invalid_argument("TxBeamformer: power must be positive");
    for (Eigen::Index m = 0; m < alpha.size(); ++m) alpha[m] = wrap_angle(alpha[m]);
}

CVector TxBeamformer::weights() const {
    const double amp = std::sqrt(power / static_cast<double>(alpha.size()));
    CVector x(alpha.size());
    for (Eigen::Index m = 0; m < alpha.size(); ++m)
        x[m] = std::polar(amp, alpha[m]);
    return x;
}

RisPhases::RisPhases(RVector theta_in) : theta(std::move(theta_in)) {
    for (Eigen::Index n = 0; n < theta.size(); ++n) theta[n] = wrap_angle(theta[n]);
}

CVector RisPhases::v() const {
    CVector out(theta.size());
    for (Eigen::Index n = 0; n < theta.size(); ++n)
        out[n] = std::polar(1.0, -theta[n]);
    return out;
}

PowerConstraints::PowerConstraints(RVector p_in, double eta_in)
    : p(std::move(p_in)), eta(eta_in) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("PowerConstraints: eta must lie in [0,1]");
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p[k] < 0.0) throw std::invalid_argument("PowerConstraints: p entries must be >= 0");
}

PowerConstraints PowerConstraints::uniform(int num_users, double level, double eta_in) {
    return PowerConstraints(RVector::Constant(num_users, level), eta_in);
}

CMatrix compose_channel(const ChannelSet& channels, const RisPhases& ris) {
    if (ris.size() != channels.num_elements())
        throw std::invalid_argument("compose_channel: theta length must equal N");
    const Eigen::Index N = channels.num_elements();
    CVector psi(N); // Psi_nn = exp(j*theta_n)
    for (Eigen::Index n = 0; n < N; ++n)
        psi[n] = std::polar(1.0, ris.theta[n]);
    return channels.H_r * psi.asDiagonal() * channels.G + channels.H_d;
}

RVector received_powers(const CMatrix& H, const TxBeamformer& beamformer, double eta) {
    if (H.cols() != beamformer.size())
        throw std::invalid_argument("received_powers: H columns must match beamformer length");
    const CVector y = H * beamformer.weights();
    return eta * y.cwiseAbs2();
}

double total_power(const RVector& Q) { return Q.sum(); }

std::vector<bool> check_feasibility(const RVector& Q, const PowerConstraints& constraints,
                                    double tol) {
    if (Q.size() != constraints.p.size())
        throw std::invalid_argument("check_feasibility: dimension mismatch");
    std::vector<bool> ok(Q.size());
    for (Eigen::Index k = 0; k < Q.size(); ++k)
        ok[k] = Q[k] >= constraints.p[k] - tol;
    return ok;
}

double sca_bound_x(const CMatrix& H, const CVector& x_hat, const CVector& x) {
    const CVector Hx_hat = H * x_hat;
    const CVector Hx = H * x;
    const Complex cross = Hx_hat.dot(Hx); // x_hat^H H^H H x
    return 2.0 * cross.real() - Hx_hat.squaredNorm();
}

RisQuadratic build_ris_quadratic(const ChannelSet& channels, const TxBeamformer& beamformer) {
    const int K = channels.num_users();
    const Eigen::Index N = channels.num_elements();
    const CVector x = beamformer.weights();
    const CVector Gx = channels.G * x;

    RisQuadratic out;
    out.l.reserve(K);
    out.L = CMatrix::Zero(N + 1, N + 1);
    for (int k = 0; k < K; ++k) {
        CVector lk(N + 1);
        // c_k[n] = H_r[k,n] * (Gx)[n]; the row of H_r is h_rk^H, so its
        // entries are conj(h_rk) already.
        for (Eigen::Index n = 0; n < N; ++n)
            lk[n] = channels.H_r(k, n) * Gx[n];
        // a_k = h_dk^H x; row k of H_d is h_dk^H, so a plain product.
        lk[N] = (channels.H_d.row(k) * x)(0);
        out.l.push_back(std::move(lk));
    }
    for (int k = 0; k < K; ++k)
        out.L += out.l[k] * out.l[k].adjoint();
    return out;
}

} // namespace riswpt
