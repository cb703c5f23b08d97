#include "megc/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace megc {

namespace {

void require(bool cond, const char* field, const char* what) {
    if (!cond) {
        throw std::invalid_argument(std::string("SystemParams: ") + field + " " + what);
    }
}

void require_range(const std::array<double, 2>& r, const char* field) {
    require(r[0] > 0.0 && r[0] <= r[1], field, "must satisfy 0 < lo <= hi");
}

}  // namespace

void SystemParams::validate() const {
    require(b_off_hz > 0.0, "b_off_hz", "must be > 0");
    require(b_back_hz > 0.0, "b_back_hz", "must be > 0");
    require(p_comp_w > 0.0, "p_comp_w", "must be > 0");
    require(p_ve_w > 0.0, "p_ve_w", "must be > 0");
    require(p_es_w > 0.0, "p_es_w", "must be > 0");
    require(n0_w_per_hz > 0.0, "n0_w_per_hz", "must be > 0");
    require(f_comp_cps > 0.0, "f_comp_cps", "must be > 0");
    require(f_es_cps > 0.0, "f_es_cps", "must be > 0");
    require(chi_cycles_per_bit > 0.0, "chi_cycles_per_bit", "must be > 0");
    require(xi >= 0.0, "xi", "must be >= 0");
    require(zeta >= 0.0, "zeta", "must be >= 0");
    require(psi >= 1.0, "psi", "must be >= 1");
    require(dist_comp_m > 0.0, "dist_comp_m", "must be > 0");
    require(dist_aigc_m > 0.0, "dist_aigc_m", "must be > 0");
    require(dist_ve_m > 0.0, "dist_ve_m", "must be > 0");
    require(std::isfinite(ref_gain_db), "ref_gain_db", "must be finite");
    require(pathloss_exp >= 0.0, "pathloss_exp", "must be >= 0");
    require(d_comp_mean_mbits > 0.0, "d_comp_mean_mbits", "must be > 0");
    require_range(d_comp_range_mbits, "d_comp_range_mbits");
    require_range(d_ve_range_mbits, "d_ve_range_mbits");
    require_range(d_gen_range_mbits, "d_gen_range_mbits");
    require(t_horizon >= 1, "t_horizon", "must be >= 1");
}

double SystemParams::pathloss_gain(double distance_m) const {
    const double g0 = std::pow(10.0, ref_gain_db / 10.0);
    return g0 * std::pow(distance_m, -pathloss_exp);
}

namespace {

// Unit-mean Rician power gain: LoS amplitude sqrt(K/(K+1)) plus circular
// scatter with per-component variance 1/(2(K+1)).
double rician_fade(double k_factor, RandomStream& rng) {
    const double los = std::sqrt(k_factor / (k_factor + 1.0));
    const double sigma = std::sqrt(0.5 / (k_factor + 1.0));
    const double re = los + sigma * rng.normal();
    const double im = sigma * rng.normal();
    return re * re + im * im;
}

}  // namespace

ChannelState sample_channel(const SystemParams& params, RandomStream& rng,
                            const FadingConfig& fading) {
    ChannelState ch;
    ch.h_comp_off = params.pathloss_gain(params.dist_comp_m);
    ch.h_ve_off = params.pathloss_gain(params.dist_ve_m);
    ch.h_aigc_back = params.pathloss_gain(params.dist_aigc_m);
    ch.h_ve_back = params.pathloss_gain(params.dist_ve_m);
    if (fading.enabled) {
        ch.h_comp_off *= rician_fade(fading.rician_k, rng);
        ch.h_ve_off *= rician_fade(fading.rician_k, rng);
        ch.h_aigc_back *= rician_fade(fading.rician_k, rng);
        ch.h_ve_back *= rician_fade(fading.rician_k, rng);
    }
    return ch;
}

double offload_rate(double alpha, double bandwidth, double tx_power, double gain, double n0) {
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("offload_rate: alpha outside [0,1]");
    if (bandwidth <= 0.0) throw std::domain_error("offload_rate: bandwidth must be > 0");
    if (tx_power < 0.0) throw std::domain_error("offload_rate: negative tx_power");
    if (gain < 0.0) throw std::domain_error("offload_rate: negative gain");
    if (n0 <= 0.0) throw std::domain_error("offload_rate: n0 must be > 0");
    if (alpha == 0.0) return 0.0;  // continuity limit of alpha*B*log2(1 + c/alpha)
    const double snr = tx_power * gain / (alpha * bandwidth * n0);
    return alpha * bandwidth * std::log2(1.0 + snr);
}

double backhaul_rate(double alpha, double bandwidth, double power_share, double total_power,
                     double gain, double n0) {
    if (power_share < 0.0 || power_share > 1.0) {
        throw std::domain_error("backhaul_rate: power_share outside [0,1]");
    }
    return offload_rate(alpha, bandwidth, power_share * total_power, gain, n0);
}

}  // namespace megc
