#pragma once

#include "riswpt/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>

namespace riswpt {

/// Deterministic per-link random stream. mt19937_64 is fully specified by
/// the standard; Gaussian draws use an explicit Box-Muller transform so
/// identical seeds give identical channels on every platform. Substream
/// seeds are derived from (seed, link-id), so adding users or elements
/// does not perturb the draws of existing links.
class LinkRng {
public:
    LinkRng(std::uint64_t seed, const std::string& link_id);

    double uniform();                 // in [0, 1)
    double gaussian();                // standard normal
    Complex complex_gaussian();       // CN(0, 1): re/im each N(0, 1/2)
    double uniform_angle();           // in [-pi, pi)

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Geometry and fading parameters of the simulated scenario.
struct ScenarioConfig {
    int M = 8;             // BS antennas
    int K = 8;             // users
    std::vector<int> N_l = {16, 16}; // elements per RIS
    double carrier_freq = 755e6;
    double tx_power = 10.0;
    double rician_g = 2.0;   // BS-RIS Rician factor
    double rician_hr = 2.0;  // RIS-to-local-user Rician factor
    double pathloss_exp = 3.0;
    double d1 = 8.0, d2 = 7.0, d3 = 4.0, d4 = 5.0;
    double delta0 = kPi / 4.0, delta1 = kPi / 4.0, delta2 = kPi / 3.0;
    double element_spacing = 0.5; // in wavelengths
    std::vector<int> user_group; // user -> RIS index; empty = split in halves
    std::vector<std::pair<std::string, int>> blocked_links; // (source, user), forced Rayleigh
    std::uint64_t seed = 0;

    int num_elements() const {
        int n = 0;
        for (int nl : N_l) n += nl;
        return n;
    }
    int num_ris() const { return static_cast<int>(N_l.size()); }

    /// Group index of a user (default: first half -> RIS 0, rest -> RIS 1).
    int group_of(int user) const;

    void validate() const;
};

/// ULA steering vector: entry m = exp(j*2*pi*spacing*m*sin(angle)).
CVector steering_vector(int count, double spacing_wavelengths, double angle);

/// Amplitude gain sqrt(C0) * d^(-n/2) with C0 = (lambda/(4*pi))^2 at the
/// 1 m reference distance.
double pathloss_gain(double d_meters, double n_exp, double f_c);

/// sqrt(f/(1+f)) * los + sqrt(1/(1+f)) * W with W iid CN(0,1).
CMatrix rician_matrix(int rows, int cols, double factor, const CMatrix& los, LinkRng& rng);

/// iid CN(0,1) entries; identical to rician_matrix with factor 0.
CMatrix rayleigh_matrix(int rows, int cols, LinkRng& rng);

/// Builds the full scenario: BS-RIS links Rician, RIS-to-local-group links
/// Rician, direct and cross-group links Rayleigh, all scaled by the
/// pathloss of their geometric distance. Deterministic given the seed.
ChannelSet build_scenario(const ScenarioConfig& config);

} // namespace riswpt
