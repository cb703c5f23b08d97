#include "megc/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "megc/env.hpp"

namespace megc {

namespace {

// The six free ratios; the paired bandwidth shares and the third compute
// share are determined.
struct Coords {
    double a_off = 0.5;   // alpha_comp_off
    double a_back = 0.5;  // alpha_aigc_back
    double beta = 0.5;
    double lambda = 0.5;
    double w1 = 1.0 / 3.0;  // omega_comp
    double w2 = 1.0 / 3.0;  // omega_aigc
};

Action to_action(const Coords& c) {
    Action a;
    a.alpha_comp_off = c.a_off;
    a.alpha_ve_off = 1.0 - c.a_off;
    a.alpha_aigc_back = c.a_back;
    a.alpha_ve_back = 1.0 - c.a_back;
    a.beta = c.beta;
    a.lambda = c.lambda;
    a.omega_comp = c.w1;
    a.omega_aigc = c.w2;
    a.omega_ve = 1.0 - c.w1 - c.w2;
    return a;
}

Coords from_action(const Action& a) {
    return {a.alpha_comp_off, a.alpha_aigc_back, a.beta, a.lambda, a.omega_comp, a.omega_aigc};
}

// Grid axis: interior multiples of the resolution plus the even-split
// values, so the fixed-allocation point is always a grid point.
std::vector<double> axis_values(double res) {
    std::vector<double> v;
    for (int i = 1;; ++i) {
        double x = i * res;
        if (x >= 1.0 - 1e-12) break;
        v.push_back(x);
    }
    v.push_back(0.5);
    v.push_back(1.0 / 3.0);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            v.end());
    return v;
}

struct Candidate {
    Action action;
    double latency = std::numeric_limits<double>::infinity();
};

// Strict improvement only: ties keep the earlier candidate.
void consider(Candidate& best, const Action& a, double latency) {
    if (latency < best.latency) best = {a, latency};
}

// Golden-section line search; returns the best point actually evaluated,
// so the caller can reject anything worse than where it already is.
template <typename F>
std::pair<double, double> golden_min(const F& f, double lo, double hi, int iters) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    double xbest = c, fbest = fc;
    if (fd < fbest) { xbest = d; fbest = fd; }
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc < fbest) { xbest = c; fbest = fc; }
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd < fbest) { xbest = d; fbest = fd; }
        }
    }
    return {xbest, fbest};
}

void set_coord(Coords& c, int k, double x) {
    switch (k) {
        case 0: c.a_off = x; break;
        case 1: c.a_back = x; break;
        case 2: c.beta = x; break;
        case 3: c.lambda = x; break;
        case 4: c.w1 = x; break;
        default: c.w2 = x; break;
    }
}

}  // namespace

Action fra_policy(const FraConfig& config) {
    Action a;
    a.alpha_comp_off = config.alpha_off;
    a.alpha_ve_off = 1.0 - config.alpha_off;
    a.alpha_aigc_back = config.alpha_back;
    a.alpha_ve_back = 1.0 - config.alpha_back;
    a.beta = config.beta;
    a.lambda = config.lambda;
    a.omega_comp = config.omega[0];
    a.omega_aigc = config.omega[1];
    a.omega_ve = config.omega[2];
    a.validate();
    return a;
}

Action rra_policy(RandomStream& rng) {
    auto ratio = [&rng]() { return kRatioFloor + (1.0 - 2.0 * kRatioFloor) * rng.uniform01(); };
    Action a;
    a.alpha_comp_off = ratio();
    a.alpha_ve_off = 1.0 - a.alpha_comp_off;
    a.alpha_aigc_back = ratio();
    a.alpha_ve_back = 1.0 - a.alpha_aigc_back;
    a.beta = ratio();
    a.lambda = ratio();
    // Flat Dirichlet via normalized exponentials, shrunk to the interior.
    double e1 = rng.exponential(), e2 = rng.exponential(), e3 = rng.exponential();
    double z = e1 + e2 + e3;
    a.omega_comp = kRatioFloor + (1.0 - 3.0 * kRatioFloor) * (e1 / z);
    a.omega_aigc = kRatioFloor + (1.0 - 3.0 * kRatioFloor) * (e2 / z);
    a.omega_ve = 1.0 - a.omega_comp - a.omega_aigc;
    return a;
}

OracleResult oracle_per_slot(const ChannelState& channel, const TaskArrivals& tasks,
                             const SystemParams& params, const OracleOptions& options,
                             const std::vector<Action>& warm_starts) {
    if (!(options.resolution > 0.0) || options.resolution > 0.5)
        throw std::invalid_argument("oracle resolution must be in (0, 0.5]");
    if (options.golden_iters < 1 || options.max_sweeps < 1)
        throw std::invalid_argument("oracle polish budgets must be positive");

    auto eval = [&](const Action& a) {
        return slot_latency(a, channel, tasks, params).slot_total;
    };

    const std::vector<double> axis = axis_values(options.resolution);
    const double axis_min = axis.front();

    // The slot total splits into independent groups:
    //   [comp pipeline + VE offload](a_off, lambda, w1)
    //   + [AIGC ES](w2) + [VE ES](1 - w1 - w2)
    //   + [both backhauls](a_back, beta)
    // so the full product grid collapses into three small scans whose
    // minimum matches a brute-force sweep exactly.
    struct M1 {
        double val = std::numeric_limits<double>::infinity();
        double a_off = 0.0, lambda = 0.0;
    };
    std::vector<M1> m1(axis.size());
    for (double a_off : axis) {
        const double r_off_c = offload_rate(a_off, params.b_off_hz, params.p_comp_w,
                                            channel.h_comp_off, params.n0_w_per_hz);
        const double r_off_v = offload_rate(1.0 - a_off, params.b_off_hz, params.p_ve_w,
                                            channel.h_ve_off, params.n0_w_per_hz);
        const double ve_off = latency_div(tasks.d_ve, r_off_v);
        for (double lambda : axis) {
            Action probe;
            probe.lambda = lambda;
            for (std::size_t wi = 0; wi < axis.size(); ++wi) {
                probe.omega_comp = axis[wi];
                double val = comp_latency(probe, tasks, r_off_c, params).total + ve_off;
                if (val < m1[wi].val) m1[wi] = {val, a_off, lambda};
            }
        }
    }

    std::vector<double> g2(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
        Action probe;
        probe.omega_aigc = axis[i];
        g2[i] = aigc_latency(probe, tasks, 1.0, params).es;
    }
    auto g3 = [&](double w3) {
        Action probe;
        probe.omega_ve = w3;
        return ve_latency(probe, tasks, 1.0, 1.0, params).es;
    };

    double back_best = std::numeric_limits<double>::infinity();
    double back_a = 0.0, back_beta = 0.0;
    for (double a_back : axis) {
        for (double beta : axis) {
            const double r_a = backhaul_rate(a_back, params.b_back_hz, beta, params.p_es_w,
                                             channel.h_aigc_back, params.n0_w_per_hz);
            const double r_v = backhaul_rate(1.0 - a_back, params.b_back_hz, 1.0 - beta,
                                             params.p_es_w, channel.h_ve_back,
                                             params.n0_w_per_hz);
            Action probe;
            double val = aigc_latency(probe, tasks, r_a, params).back +
                         ve_latency(probe, tasks, 1.0, r_v, params).back;
            if (val < back_best) {
                back_best = val;
                back_a = a_back;
                back_beta = beta;
            }
        }
    }

    Coords gbest;
    double gbest_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < axis.size(); ++i) {
        for (std::size_t j = 0; j < axis.size(); ++j) {
            double w3 = 1.0 - axis[i] - axis[j];
            if (w3 < axis_min - 1e-12) continue;
            double val = m1[i].val + g2[j] + g3(w3) + back_best;
            if (val < gbest_val) {
                gbest_val = val;
                gbest = {m1[i].a_off, back_a, back_beta, m1[i].lambda, axis[i], axis[j]};
            }
        }
    }

    OracleResult result;
    result.grid_action = to_action(gbest);
    result.grid_breakdown = slot_latency(result.grid_action, channel, tasks, params);

    Candidate best{result.grid_action, result.grid_breakdown.slot_total};
    const Action even = fra_policy();
    consider(best, even, eval(even));
    for (const Action& w : warm_starts) {
        w.validate();
        // Scored exactly as given, before any coordinate round trip, so
        // the oracle can never report a value above a warm start's own.
        consider(best, w, eval(w));
    }

    if (options.polish) {
        std::vector<Coords> starts;
        starts.push_back(gbest);
        starts.push_back(from_action(even));
        for (const Action& w : warm_starts) starts.push_back(from_action(w));

        const double lo = kRatioFloor;
        for (const Coords& start : starts) {
            Coords cur = start;
            double fcur = eval(to_action(cur));
            consider(best, to_action(cur), fcur);
            for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
                const double sweep_start = fcur;
                for (int k = 0; k < 6; ++k) {
                    double hi = 1.0 - lo;
                    if (k == 4) hi = 1.0 - lo - cur.w2;  // keep omega_ve >= floor
                    if (k == 5) hi = 1.0 - lo - cur.w1;
                    if (hi - lo < 1e-12) continue;
                    auto line = [&](double x) {
                        Coords c = cur;
                        set_coord(c, k, x);
                        return eval(to_action(c));
                    };
                    auto [x, fx] = golden_min(line, lo, hi, options.golden_iters);
                    if (fx < fcur) {
                        set_coord(cur, k, x);
                        fcur = fx;
                    }
                }
                if (sweep_start - fcur <= 1e-13 * (1.0 + std::abs(sweep_start))) break;
            }
            consider(best, to_action(cur), fcur);
        }
    }

    result.action = best.action;
    result.breakdown = slot_latency(best.action, channel, tasks, params);
    return result;
}

}  // namespace megc
