#include "megc/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace megc {

namespace {

bool in_unit_box(double x) { return x >= 0.0 && x <= 1.0 && std::isfinite(x); }

}  // namespace

bool Action::satisfies_constraints(double tol) const {
    for (double x : as_vector()) {
        if (!in_unit_box(x)) return false;
    }
    if (std::abs(alpha_comp_off + alpha_ve_off - 1.0) > tol) return false;
    if (std::abs(alpha_aigc_back + alpha_ve_back - 1.0) > tol) return false;
    if (std::abs(omega_comp + omega_aigc + omega_ve - 1.0) > tol) return false;
    return true;
}

void Action::validate(double tol) const {
    static const char* names[9] = {"alpha_comp_off", "alpha_ve_off", "alpha_aigc_back",
                                   "alpha_ve_back",  "beta",         "lambda",
                                   "omega_comp",     "omega_aigc",   "omega_ve"};
    const auto v = as_vector();
    for (int i = 0; i < 9; ++i) {
        if (!in_unit_box(v[i])) {
            throw std::invalid_argument(std::string("Action: ") + names[i] + " outside [0,1]");
        }
    }
    if (std::abs(alpha_comp_off + alpha_ve_off - 1.0) > tol) {
        throw std::invalid_argument("Action: offload bandwidth shares do not sum to 1");
    }
    if (std::abs(alpha_aigc_back + alpha_ve_back - 1.0) > tol) {
        throw std::invalid_argument("Action: backhaul bandwidth shares do not sum to 1");
    }
    if (std::abs(omega_comp + omega_aigc + omega_ve - 1.0) > tol) {
        throw std::invalid_argument("Action: compute shares do not sum to 1");
    }
}

CompLatency comp_latency(const Action& action, const TaskArrivals& tasks, double r_off,
                         const SystemParams& params) {
    CompLatency out;
    const double offloaded = action.lambda * tasks.d_comp;
    out.off = latency_div(offloaded, r_off);
    out.local = (1.0 - action.lambda) * params.chi_cycles_per_bit * tasks.d_comp /
                params.f_comp_cps;
    out.es = latency_div(offloaded * params.chi_cycles_per_bit,
                         action.omega_comp * params.f_es_cps);
    out.total = std::max(out.local, out.off + out.es);
    return out;
}

AigcLatency aigc_latency(const Action& action, const TaskArrivals& tasks, double r_back,
                         const SystemParams& params) {
    AigcLatency out;
    const double cycles = params.xi * params.chi_cycles_per_bit * tasks.d_aigc_out + params.zeta;
    out.es = latency_div(cycles, action.omega_aigc * params.f_es_cps);
    out.back = latency_div(tasks.d_aigc_out, r_back);
    out.total = out.es + out.back;
    return out;
}

VeLatency ve_latency(const Action& action, const TaskArrivals& tasks, double r_off,
                     double r_back, const SystemParams& params) {
    VeLatency out;
    out.off = latency_div(tasks.d_ve, r_off);
    const double cycles = params.xi * params.chi_cycles_per_bit * tasks.d_ve_out + params.zeta;
    out.es = latency_div(cycles, action.omega_ve * params.f_es_cps);
    out.back = latency_div(tasks.d_ve_out, r_back);
    out.total = out.off + out.es + out.back;
    return out;
}

LatencyBreakdown slot_latency(const Action& action, const ChannelState& channel,
                              const TaskArrivals& tasks, const SystemParams& params) {
    const double r_comp_off = offload_rate(action.alpha_comp_off, params.b_off_hz,
                                           params.p_comp_w, channel.h_comp_off,
                                           params.n0_w_per_hz);
    const double r_ve_off = offload_rate(action.alpha_ve_off, params.b_off_hz, params.p_ve_w,
                                         channel.h_ve_off, params.n0_w_per_hz);
    const double r_aigc_back = backhaul_rate(action.alpha_aigc_back, params.b_back_hz,
                                             action.beta, params.p_es_w, channel.h_aigc_back,
                                             params.n0_w_per_hz);
    const double r_ve_back = backhaul_rate(action.alpha_ve_back, params.b_back_hz,
                                           1.0 - action.beta, params.p_es_w, channel.h_ve_back,
                                           params.n0_w_per_hz);

    const CompLatency c = comp_latency(action, tasks, r_comp_off, params);
    const AigcLatency a = aigc_latency(action, tasks, r_aigc_back, params);
    const VeLatency v = ve_latency(action, tasks, r_ve_off, r_ve_back, params);

    LatencyBreakdown b;
    b.comp_local = c.local;
    b.comp_off = c.off;
    b.comp_es = c.es;
    b.comp_total = c.total;
    b.aigc_es = a.es;
    b.aigc_back = a.back;
    b.aigc_total = a.total;
    b.ve_off = v.off;
    b.ve_es = v.es;
    b.ve_back = v.back;
    b.ve_total = v.total;
    b.slot_total = b.comp_total + b.aigc_total + b.ve_total;
    return b;
}

}  // namespace megc
