#pragma once

// Straight-line re-derivation of the rate and latency pipeline, kept
// deliberately independent of the library: every quantity is one explicit
// long-double expression, no shared helpers, no reuse of library code.
// Serves as the extended-precision oracle for the fidelity checks.

#include <cmath>
#include <limits>

namespace refmodel {

struct Inputs {
    // link gains
    long double h_comp_off, h_ve_off, h_aigc_back, h_ve_back;
    // task volumes, bits
    long double d_comp, d_ve, d_aigc_out, d_ve_out;
    // decision variables
    long double a_comp_off, a_ve_off, a_aigc_back, a_ve_back;
    long double beta, lambda;
    long double w_comp, w_aigc, w_ve;
    // system constants
    long double b_off, b_back, p_comp, p_ve, p_es, n0;
    long double f_loc, f_es, chi, xi, zeta;
};

struct Outputs {
    long double r_comp_off, r_ve_off, r_aigc_back, r_ve_back;
    long double comp_local, comp_off, comp_es, comp_total;
    long double aigc_es, aigc_back, aigc_total;
    long double ve_off, ve_es, ve_back, ve_total;
    long double slot_total;
};

inline long double ref_rate(long double alpha, long double bw, long double p, long double h,
                            long double n0) {
    if (alpha <= 0.0L) return 0.0L;
    return alpha * bw * std::log2(1.0L + p * h / (alpha * bw * n0));
}

// 0 work costs 0; positive work on a dead resource costs forever.
inline long double ref_div(long double work, long double cap) {
    if (work == 0.0L) return 0.0L;
    if (cap <= 0.0L) return std::numeric_limits<long double>::infinity();
    return work / cap;
}

inline Outputs evaluate(const Inputs& in) {
    Outputs o;
    o.r_comp_off = ref_rate(in.a_comp_off, in.b_off, in.p_comp, in.h_comp_off, in.n0);
    o.r_ve_off = ref_rate(in.a_ve_off, in.b_off, in.p_ve, in.h_ve_off, in.n0);
    o.r_aigc_back = ref_rate(in.a_aigc_back, in.b_back, in.beta * in.p_es, in.h_aigc_back, in.n0);
    o.r_ve_back =
        ref_rate(in.a_ve_back, in.b_back, (1.0L - in.beta) * in.p_es, in.h_ve_back, in.n0);

    o.comp_off = ref_div(in.lambda * in.d_comp, o.r_comp_off);
    o.comp_local = (1.0L - in.lambda) * in.chi * in.d_comp / in.f_loc;
    o.comp_es = ref_div(in.lambda * in.d_comp * in.chi, in.w_comp * in.f_es);
    o.comp_total = std::max(o.comp_local, o.comp_off + o.comp_es);

    o.aigc_es = ref_div(in.xi * in.chi * in.d_aigc_out + in.zeta, in.w_aigc * in.f_es);
    o.aigc_back = ref_div(in.d_aigc_out, o.r_aigc_back);
    o.aigc_total = o.aigc_es + o.aigc_back;

    o.ve_off = ref_div(in.d_ve, o.r_ve_off);
    o.ve_es = ref_div(in.xi * in.chi * in.d_ve_out + in.zeta, in.w_ve * in.f_es);
    o.ve_back = ref_div(in.d_ve_out, o.r_ve_back);
    o.ve_total = o.ve_off + o.ve_es + o.ve_back;

    o.slot_total = o.comp_total + o.aigc_total + o.ve_total;
    return o;
}

}  // namespace refmodel
