#include "riswpt/model.hpp"
#include "riswpt/oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace riswpt;
namespace tu = riswpt::testutil;

namespace {

ChannelSet direct_only(const CMatrix& H_d) {
    const int M = static_cast<int>(H_d.cols());
    return ChannelSet(H_d, CMatrix(H_d.rows(), 0), CMatrix(0, M), RVector(0));
}

// independent max-min over the same grid, by direct enumeration
double grid_max_min(const ChannelSet& ch, const GridSpec& spec, double P) {
    const int M = ch.num_antennas();
    const int N = ch.num_elements();
    const int K = ch.num_users();
    const int levels = spec.phase_levels;
    const double amp = std::sqrt(P / M);

    std::vector<int> idx(M + N, 0);
    double best = -1.0;
    for (;;) {
        CVector x(M);
        for (int m = 0; m < M; ++m)
            x[m] = std::polar(amp, -kPi + 2.0 * kPi * idx[m] / levels);
        RVector theta(N);
        for (int n = 0; n < N; ++n)
            theta[n] = -kPi + 2.0 * kPi * idx[M + n] / levels;
        const CMatrix H = compose_channel(ch, RisPhases(theta));
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
            Complex acc = 0.0;
            for (int m = 0; m < M; ++m) acc += H(k, m) * x[m];
            worst = std::min(worst, std::norm(acc));
        }
        best = std::max(best, worst);

        int i = 0;
        while (i < M + N && ++idx[i] == levels) idx[i++] = 0;
        if (i == M + N) break;
    }
    return best;
}

} // namespace

TEST_CASE("grid_search single antenna: all points tie at P|h|^2") {
    auto g = tu::make_rng(40);
    const CMatrix h = tu::rand_cmatrix(1, 1, g);
    const auto ch = direct_only(h);
    GridSpec spec;
    spec.phase_levels = 8;
    const double P = 2.0;
    const auto best = grid_search(ch, PowerConstraints::uniform(1, 0.0), spec, P);
    CHECK(best.feasible);
    CHECK(best.objective == doctest::Approx(P * std::norm(h(0, 0))).epsilon(1e-12));
}

TEST_CASE("grid_search aligns phases when the offset is on the grid") {
    CMatrix h(1, 2);
    h << Complex(1, 0), Complex(0, 1);
    const auto ch = direct_only(h);
    GridSpec spec;
    spec.phase_levels = 4; // pi/2 offset representable
    const double P = 2.0;
    const auto best = grid_search(ch, PowerConstraints::uniform(1, 0.0), spec, P);
    CHECK(best.objective == doctest::Approx((P / 2.0) * 4.0).epsilon(1e-12));
}

TEST_CASE("finer grids never decrease the best objective") {
    auto g = tu::make_rng(41);
    const auto ch = tu::rand_channels(2, 2, 1, g);
    GridSpec coarse, fine;
    coarse.phase_levels = 4;
    fine.phase_levels = 16;
    const auto c = grid_search(ch, PowerConstraints::uniform(2, 0.0), coarse, 1.0);
    const auto f = grid_search(ch, PowerConstraints::uniform(2, 0.0), fine, 1.0);
    CHECK(f.objective >= c.objective - 1e-12);
}

TEST_CASE("grid_search refuses oversized enumerations") {
    auto g = tu::make_rng(42);
    const auto ch = tu::rand_channels(2, 8, 8, g);
    GridSpec spec;
    spec.phase_levels = 16;
    spec.max_enumeration = 1000;
    CHECK_THROWS_AS(grid_search(ch, PowerConstraints::uniform(2, 0.0), spec, 1.0),
                    std::invalid_argument);
}

TEST_CASE("grid_search reports the least-violating point when infeasible") {
    auto g = tu::make_rng(43);
    const CMatrix h = tu::rand_cmatrix(1, 2, g);
    const auto ch = direct_only(h);
    GridSpec spec;
    spec.phase_levels = 4;
    const auto res = grid_search(ch, PowerConstraints::uniform(1, 1e9), spec, 1.0);
    CHECK_FALSE(res.feasible);
    CHECK(res.x_phases.size() == 2);
}

TEST_CASE("estimate_qmm for a single user converges to the max power") {
    auto g = tu::make_rng(44);
    const auto ch = direct_only(tu::rand_cmatrix(1, 3, g));
    SolverConfig cfg;
    const double bisect_tol = 0.01;
    const auto est = estimate_qmm_witness(ch, cfg, bisect_tol, 2.0);

    const auto p0 = PowerConstraints::uniform(1, 0.0);
    const SolveResult sol0 = spmc_sca_admm(ch, p0, TxBeamformer(RVector::Zero(3), 2.0),
                                           RisPhases(RVector(0)), cfg);
    CHECK(est.q == doctest::Approx(sol0.objective()).epsilon(2.0 * bisect_tol));
}

TEST_CASE("the returned level is always re-achievable") {
    auto g = tu::make_rng(45);
    const auto ch = tu::rand_channels(2, 3, 2, g);
    SolverConfig cfg;
    const auto est = estimate_qmm_witness(ch, cfg, 0.02, 1.0);
    CHECK(est.witness.per_user_power.minCoeff() >= est.q - 1e-12);
    // re-solve with p = q * ones starting from the witness
    const auto constraints = PowerConstraints::uniform(2, est.q);
    const SolveResult again =
        spmc_sca_admm(ch, constraints, est.witness.beamformer, est.witness.ris, cfg);
    CHECK(again.all_feasible());
}

TEST_CASE("estimate_qmm is within 10% of the grid max-min on a tiny instance") {
    auto g = tu::make_rng(46);
    const auto ch = tu::rand_channels(2, 2, 2, g);
    SolverConfig cfg;
    const double q = estimate_qmm(ch, cfg, 0.01, 1.0);
    GridSpec spec;
    spec.phase_levels = 16;
    const double grid_mm = grid_max_min(ch, spec, 1.0);
    CHECK(q >= grid_mm * 0.9);
    // the continuous optimum can only beat the quantized grid slightly
    CHECK(q <= grid_mm * 1.25);
}

TEST_CASE("projection_oracle basics") {
    LinkRng rng(1, "po");
    CVector h(1), z(1);
    h << 1.0;
    z << 2.0;
    CHECK(projection_oracle(z, h, 1.0, 10, rng) == doctest::Approx(0.0)); // feasible

    z << 0.5;
    const double d = projection_oracle(z, h, 1.0, 20000, rng);
    CHECK(d >= 0.5 - 1e-12);
    CHECK(d == doctest::Approx(0.5).epsilon(0.05));
}
