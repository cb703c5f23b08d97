#pragma once

#include <array>
#include <limits>

#include "megc/system.hpp"

namespace megc {

inline constexpr double kInfLatency = std::numeric_limits<double>::infinity();

// Full per-slot decision vector. Bandwidth ratio pairs and the ES compute
// shares are coupled by unit-sum constraints; see satisfies_constraints().
struct Action {
    double alpha_comp_off = 0.5;  // offload bandwidth share of the computation user
    double alpha_ve_off = 0.5;    // offload bandwidth share of the VE user
    double alpha_aigc_back = 0.5; // backhaul bandwidth share of the AIGC user
    double alpha_ve_back = 0.5;   // backhaul bandwidth share of the VE user
    double beta = 0.5;            // ES power share to the AIGC user (VE gets 1-beta)
    double lambda = 0.5;          // offloaded fraction of the computation packet
    double omega_comp = 1.0 / 3.0;  // ES compute shares, sum to 1
    double omega_aigc = 1.0 / 3.0;
    double omega_ve = 1.0 / 3.0;

    std::array<double, 9> as_vector() const {
        return {alpha_comp_off, alpha_ve_off, alpha_aigc_back, alpha_ve_back,
                beta,           lambda,       omega_comp,      omega_aigc,  omega_ve};
    }
    static Action from_vector(const std::array<double, 9>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
    }

    // All nine ratios in [0,1] and the three unit-sum couplings hold
    // within tol.
    bool satisfies_constraints(double tol = 1e-9) const;
    // Throws std::invalid_argument naming the violated constraint.
    void validate(double tol = 1e-9) const;
};

// Per-slot latency decomposition, seconds. A resource share of zero serving
// positive work yields +infinity, which propagates into the totals.
struct LatencyBreakdown {
    double comp_local = 0.0;
    double comp_off = 0.0;
    double comp_es = 0.0;
    double comp_total = 0.0;  // max(comp_local, comp_off + comp_es)
    double aigc_es = 0.0;
    double aigc_back = 0.0;
    double aigc_total = 0.0;  // aigc_es + aigc_back
    double ve_off = 0.0;
    double ve_es = 0.0;
    double ve_back = 0.0;
    double ve_total = 0.0;    // ve_off + ve_es + ve_back
    double slot_total = 0.0;  // comp_total + aigc_total + ve_total
};

struct CompLatency {
    double local = 0.0;
    double off = 0.0;
    double es = 0.0;
    double total = 0.0;
};

struct AigcLatency {
    double es = 0.0;
    double back = 0.0;
    double total = 0.0;
};

struct VeLatency {
    double off = 0.0;
    double es = 0.0;
    double back = 0.0;
    double total = 0.0;
};

// work/rate with 0/x = 0 and positive/0 = +infinity.
inline double latency_div(double work, double rate) {
    if (work <= 0.0) return 0.0;
    if (rate <= 0.0) return kInfLatency;
    return work / rate;
}

// Computation user: partial local computing plus offload to the ES.
CompLatency comp_latency(const Action& action, const TaskArrivals& tasks, double r_off,
                         const SystemParams& params);

// AIGC user: ES inference plus backhaul of the generated content. The
// request upload is negligible and carries no latency term.
AigcLatency aigc_latency(const Action& action, const TaskArrivals& tasks, double r_back,
                         const SystemParams& params);

// VE user: input offload, ES processing, backhaul of the enhanced output.
VeLatency ve_latency(const Action& action, const TaskArrivals& tasks, double r_off,
                     double r_back, const SystemParams& params);

// Composes the four link rates with the three per-user pipelines for one
// slot. Backhaul of the computation result is negligible and not modeled.
LatencyBreakdown slot_latency(const Action& action, const ChannelState& channel,
                              const TaskArrivals& tasks, const SystemParams& params);

}  // namespace megc
