#include "riswpt/channel.hpp"

#include <cmath>

namespace riswpt {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

} // namespace

LinkRng::LinkRng(std::uint64_t seed, const std::string& link_id)
    : gen_(splitmix64(seed ^ fnv1a(link_id))) {}

double LinkRng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double LinkRng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // in (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * kPi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

Complex LinkRng::complex_gaussian() {
    const double inv_sqrt2 = 0.7071067811865475244;
    const double re = gaussian() * inv_sqrt2;
    const double im = gaussian() * inv_sqrt2;
    return {re, im};
}

double LinkRng::uniform_angle() { return uniform() * 2.0 * kPi - kPi; }

int ScenarioConfig::group_of(int user) const {
    if (!user_group.empty()) return user_group.at(user);
    if (num_ris() <= 1) return 0;
    return user < (K + 1) / 2 ? 0 : 1;
}

void ScenarioConfig::validate() const {
    if (M < 1 || K < 1) throw std::invalid_argument("ScenarioConfig: M and K must be positive");
    for (int nl : N_l)
        if (nl < 1) throw std::invalid_argument("ScenarioConfig: N_l entries must be positive");
    if (num_ris() > 2)
        throw std::invalid_argument("ScenarioConfig: geometry is defined for at most two RIS");
    if (carrier_freq <= 0.0 || tx_power <= 0.0)
        throw std::invalid_argument("ScenarioConfig: frequency and power must be positive");
    if (rician_g < 0.0 || rician_hr < 0.0)
        throw std::invalid_argument("ScenarioConfig: Rician factors must be >= 0");
    if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0 || d4 <= 0.0)
        throw std::invalid_argument("ScenarioConfig: distances must be positive");
    if (element_spacing <= 0.0)
        throw std::invalid_argument("ScenarioConfig: element spacing must be positive");
    if (!user_group.empty()) {
        if (static_cast<int>(user_group.size()) != K)
            throw std::invalid_argument("ScenarioConfig: user_group must have K entries");
        for (int g : user_group)
            if (g < 0 || g >= std::max(num_ris(), 1))
                throw std::invalid_argument("ScenarioConfig: user_group index out of range");
    }
}

CVector steering_vector(int count, double spacing_wavelengths, double angle) {
    if (count < 1) throw std::invalid_argument("steering_vector: count must be >= 1");
    CVector a(count);
    const double step = 2.0 * kPi * spacing_wavelengths * std::sin(angle);
    for (int m = 0; m < count; ++m)
        a[m] = std::polar(1.0, step * static_cast<double>(m));
    return a;
}

double pathloss_gain(double d_meters, double n_exp, double f_c) {
    if (d_meters <= 0.0) throw std::domain_error("pathloss_gain: distance must be positive");
    const double lambda = kSpeedOfLight / f_c;
    const double sqrt_c0 = lambda / (4.0 * kPi); // amplitude at d0 = 1 m
    return sqrt_c0 * std::pow(d_meters, -n_exp / 2.0);
}

CMatrix rician_matrix(int rows, int cols, double factor, const CMatrix& los, LinkRng& rng) {
    if (los.rows() != rows || los.cols() != cols)
        throw std::invalid_argument("rician_matrix: LoS dimension mismatch");
    if (factor < 0.0) throw std::invalid_argument("rician_matrix: factor must be >= 0");
    const double w_los = std::sqrt(factor / (1.0 + factor));
    const double w_nlos = std::sqrt(1.0 / (1.0 + factor));
    CMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out(r, c) = w_los * los(r, c) + w_nlos * rng.complex_gaussian();
    return out;
}

CMatrix rayleigh_matrix(int rows, int cols, LinkRng& rng) {
    CMatrix out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out(r, c) = rng.complex_gaussian();
    return out;
}

ChannelSet build_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const int L = cfg.num_ris();
    const int N = cfg.num_elements();

    // 2-D layout: BS at the origin with its ULA along the x-axis. RIS
    // arrays are parallel to the BS array. Each user group sits radially
    // beyond its RIS anchor, users 0.5 m apart on the perpendicular.
    std::vector<Vec2> ris_pos(std::max(L, 1));
    std::vector<double> ris_dist = {cfg.d1, cfg.d2};
    std::vector<double> ris_angle = {cfg.delta0, cfg.delta2};
    std::vector<double> group_dist = {cfg.d3, cfg.d4};
    std::vector<double> arrival_angle = {cfg.delta1, cfg.delta2};
    const int num_groups = std::max(std::min(L, 2), 1);
    std::vector<Vec2> anchor(num_groups);
    for (int l = 0; l < num_groups; ++l) {
        const double d = ris_dist[l];
        const double ang = ris_angle[l];
        ris_pos[l] = {d * std::cos(ang), d * std::sin(ang)};
        const Vec2 radial = ris_pos[l] * (1.0 / d);
        anchor[l] = ris_pos[l] + radial * group_dist[l];
    }

    std::vector<Vec2> user_pos(cfg.K);
    {
        // offsets accumulate from the anchor so adding users never moves
        // the existing ones
        std::vector<int> members_seen(num_groups, 0);
        for (int k = 0; k < cfg.K; ++k) {
            const int g = std::min(cfg.group_of(k), num_groups - 1);
            const Vec2 radial = ris_pos[g] * (1.0 / ris_dist[g]);
            const Vec2 perp{-radial.y, radial.x};
            user_pos[k] = anchor[g] + perp * (0.5 * members_seen[g]++);
        }
    }

    std::vector<bool> forced_rayleigh(static_cast<size_t>(std::max(L, 1)) * cfg.K, false);
    for (const auto& [src, user] : cfg.blocked_links) {
        if (user < 0 || user >= cfg.K)
            throw std::invalid_argument("build_scenario: blocked link user out of range");
        if (src.rfind("ris", 0) == 0) {
            const int l = std::stoi(src.substr(3));
            if (l < 0 || l >= L)
                throw std::invalid_argument("build_scenario: blocked link RIS out of range");
            forced_rayleigh[static_cast<size_t>(l) * cfg.K + user] = true;
        }
        // "bs" sources are already Rayleigh
    }

    // direct BS-user links: Rayleigh
    CMatrix H_d(cfg.K, cfg.M);
    for (int k = 0; k < cfg.K; ++k) {
        LinkRng rng(cfg.seed, "Hd:" + std::to_string(k));
        const double d = user_pos[k].norm();
        if (d <= 0.0) throw std::domain_error("build_scenario: user at the BS position");
        H_d.row(k) =
            pathloss_gain(d, cfg.pathloss_exp, cfg.carrier_freq) * rayleigh_matrix(1, cfg.M, rng);
    }

    // BS-RIS links: Rician with steering-vector LoS
    CMatrix S(N, cfg.M);
    CMatrix H_r(cfg.K, N);
    int offset = 0;
    for (int l = 0; l < L; ++l) {
        const int Nl = cfg.N_l[l];
        LinkRng rng(cfg.seed, "S:" + std::to_string(l));
        const CVector a_ris = steering_vector(Nl, cfg.element_spacing, arrival_angle[l]);
        const CVector a_bs = steering_vector(cfg.M, cfg.element_spacing, ris_angle[l]);
        const CMatrix los = a_ris * a_bs.adjoint();
        S.middleRows(offset, Nl) = pathloss_gain(ris_dist[l], cfg.pathloss_exp, cfg.carrier_freq) *
                                   rician_matrix(Nl, cfg.M, cfg.rician_g, los, rng);

        // RIS-user links: Rician toward the local group, Rayleigh otherwise
        for (int k = 0; k < cfg.K; ++k) {
            LinkRng rng_u(cfg.seed, "Hr:" + std::to_string(l) + ":" + std::to_string(k));
            const Vec2 diff = user_pos[k] - ris_pos[l];
            const double d = diff.norm();
            if (d <= 0.0) throw std::domain_error("build_scenario: user at a RIS position");
            const double gain = pathloss_gain(d, cfg.pathloss_exp, cfg.carrier_freq);
            const bool local = std::min(cfg.group_of(k), num_groups - 1) == l &&
                               !forced_rayleigh[static_cast<size_t>(l) * cfg.K + k];
            if (local) {
                const double ang = std::atan2(diff.y, diff.x);
                // the row of H_r is h_rk^H: conjugate of the steering profile
                const CMatrix los_row =
                    steering_vector(Nl, cfg.element_spacing, ang).adjoint();
                H_r.block(k, offset, 1, Nl) =
                    gain * rician_matrix(1, Nl, cfg.rician_hr, los_row, rng_u);
            } else {
                H_r.block(k, offset, 1, Nl) = gain * rayleigh_matrix(1, Nl, rng_u);
            }
        }
        offset += Nl;
    }

    return ChannelSet(std::move(H_d), std::move(H_r), std::move(S), RVector::Ones(N), cfg.N_l);
}

} // namespace riswpt
