#pragma once

#include <array>

#include "megc/rng.hpp"

namespace megc {

// Physical constants of the three-user MEGC system: an edge server (ES)
// serving one computation user, one AIGC user, and one vision-enhancement
// (VE) user over FDMA links. All values in SI units (Hz, W, cycles/s,
// meters); data volumes in bits except the *_mbits config fields.
struct SystemParams {
    double b_off_hz = 4.0e8;        // offloading-stage bandwidth
    double b_back_hz = 4.0e8;       // backhaul-stage bandwidth
    double p_comp_w = 15.0;         // computation user transmit power
    double p_ve_w = 15.0;           // VE user transmit power
    double p_es_w = 15.0;           // ES total backhaul transmit power
    double n0_w_per_hz = 1.0e-13;   // noise PSD (-100 dBm/Hz)
    double f_comp_cps = 1.0e9;      // local CPU rate of the computation user
    double f_es_cps = 2.0e10;       // ES CPU rate
    double chi_cycles_per_bit = 500.0;  // CPU cycles per bit
    double xi = 9.97e-14;           // generation cycles-per-bit coefficient
    double zeta = 5.73;             // generation fixed-cycle offset
    double psi = 2.0;               // VE output/input volume ratio, >= 1
    double dist_comp_m = 100.0;     // ES distance to the computation user
    double dist_aigc_m = 120.0;     // ES distance to the AIGC user
    double dist_ve_m = 80.0;        // ES distance to the VE user
    double ref_gain_db = -30.0;     // channel gain at 1 m reference distance
    double pathloss_exp = 2.0;
    double d_comp_mean_mbits = 4.5;               // Poisson-mode packet mean
    std::array<double, 2> d_comp_range_mbits = {1.0, 8.0};
    std::array<double, 2> d_ve_range_mbits = {1.0, 8.0};
    std::array<double, 2> d_gen_range_mbits = {2.0, 16.0};
    int t_horizon = 100;            // slots per episode

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    // Deterministic line-of-sight gain g0 * d^(-kappa) for one link.
    double pathloss_gain(double distance_m) const;
};

// Per-slot linear power gains of the four active links.
struct ChannelState {
    double h_comp_off = 0.0;   // computation user -> ES, offload stage
    double h_ve_off = 0.0;     // VE user -> ES, offload stage
    double h_aigc_back = 0.0;  // ES -> AIGC user, backhaul stage
    double h_ve_back = 0.0;    // ES -> VE user, backhaul stage
};

// Per-slot task volumes, in bits.
struct TaskArrivals {
    double d_comp = 0.0;      // computation packet size
    double d_ve = 0.0;        // VE input volume
    double d_aigc_out = 0.0;  // expected generated AIGC volume
    double d_ve_out = 0.0;    // VE output volume, = psi * d_ve exactly
};

// Optional per-slot small-scale fading on top of path loss. The fade factor
// is a unit-mean Rician power gain so that disabling it leaves the channel
// at the deterministic path-loss value.
struct FadingConfig {
    bool enabled = false;
    double rician_k = 10.0;
};

// Samples the four link gains: pathloss_gain(d) times an independent
// unit-mean fade factor per link when fading is enabled.
ChannelState sample_channel(const SystemParams& params, RandomStream& rng,
                            const FadingConfig& fading = {});

// Shannon rate of one FDMA offload link, bits/s:
//   alpha * B * log2(1 + p * h / (alpha * B * N0)),
// with the continuity limit rate = 0 at alpha = 0.
// Throws std::domain_error on negative inputs or alpha > 1.
double offload_rate(double alpha, double bandwidth, double tx_power, double gain, double n0);

// Backhaul rate with an ES power share: identical form with
// tx_power = power_share * total_power; 0 when alpha or power_share is 0.
double backhaul_rate(double alpha, double bandwidth, double power_share, double total_power,
                     double gain, double n0);

}  // namespace megc
