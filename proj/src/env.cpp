#include "megc/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace megc {

namespace {

double squash_ratio(double logit) {
    double s = 1.0 / (1.0 + std::exp(-logit));
    return std::clamp(s, kRatioFloor, 1.0 - kRatioFloor);
}

// Stable softmax over the three simplex logits.
std::array<double, 3> softmax3(double a, double b, double c) {
    double m = std::max({a, b, c});
    double ea = std::exp(a - m), eb = std::exp(b - m), ec = std::exp(c - m);
    double z = ea + eb + ec;
    return {ea / z, eb / z, ec / z};
}

}  // namespace

Action project_action(const RawAction& raw) {
    Action a;
    a.alpha_comp_off = squash_ratio(raw.v[0]);
    a.alpha_ve_off = 1.0 - a.alpha_comp_off;
    a.alpha_aigc_back = squash_ratio(raw.v[1]);
    a.alpha_ve_back = 1.0 - a.alpha_aigc_back;
    a.beta = squash_ratio(raw.v[2]);
    a.lambda = squash_ratio(raw.v[3]);
    // Affine shrink keeps every share >= floor while the three still sum
    // to exactly 1 (clamping then renormalizing would not guarantee the
    // floor). The third share is the remainder of the rounded partial sum
    // so that omega_comp + omega_aigc + omega_ve evaluates to 1.0 exactly.
    std::array<double, 3> w = softmax3(raw.v[4], raw.v[5], raw.v[6]);
    a.omega_comp = kRatioFloor + (1.0 - 3.0 * kRatioFloor) * w[0];
    a.omega_aigc = kRatioFloor + (1.0 - 3.0 * kRatioFloor) * w[1];
    a.omega_ve = 1.0 - (a.omega_comp + a.omega_aigc);
    return a;
}

std::array<std::array<double, kRawActionDim>, kActionDim> projection_jacobian(
    const RawAction& raw) {
    std::array<std::array<double, kRawActionDim>, kActionDim> jac = {};

    // Scalar ratios: sigmoid derivative, zero where the clamp is active.
    auto ratio_grad = [](double logit) {
        double s = 1.0 / (1.0 + std::exp(-logit));
        if (s <= kRatioFloor || s >= 1.0 - kRatioFloor) return 0.0;
        return s * (1.0 - s);
    };

    // Action rows follow Action::as_vector() order.
    double g0 = ratio_grad(raw.v[0]);
    jac[0][0] = g0;   // alpha_comp_off
    jac[1][0] = -g0;  // alpha_ve_off = 1 - alpha_comp_off
    double g1 = ratio_grad(raw.v[1]);
    jac[2][1] = g1;   // alpha_aigc_back
    jac[3][1] = -g1;  // alpha_ve_back
    jac[4][2] = ratio_grad(raw.v[2]);  // beta
    jac[5][3] = ratio_grad(raw.v[3]);  // lambda

    // omega_i = floor + scale * softmax_i; d softmax_i / d logit_j =
    // w_i (delta_ij - w_j).
    std::array<double, 3> w = softmax3(raw.v[4], raw.v[5], raw.v[6]);
    double scale = 1.0 - 3.0 * kRatioFloor;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double delta = (i == j) ? 1.0 : 0.0;
            jac[6 + i][4 + j] = scale * w[i] * (delta - w[j]);
        }
    }
    return jac;
}

TaskArrivals sample_tasks(const SystemParams& params, TaskDistribution mode, RandomStream& rng) {
    auto uniform_bits = [&rng](double lo_mbits, double hi_mbits) {
        auto lo = static_cast<std::int64_t>(lo_mbits * 1e6);
        auto hi = static_cast<std::int64_t>(hi_mbits * 1e6);
        return static_cast<double>(rng.uniform_int(lo, hi));
    };

    TaskArrivals t;
    if (mode == TaskDistribution::Poisson) {
        t.d_comp = static_cast<double>(rng.poisson(params.d_comp_mean_mbits * 1e6));
        t.d_ve = static_cast<double>(rng.poisson(params.d_comp_mean_mbits * 1e6));
    } else {
        t.d_comp = uniform_bits(params.d_comp_range_mbits[0], params.d_comp_range_mbits[1]);
        t.d_ve = uniform_bits(params.d_ve_range_mbits[0], params.d_ve_range_mbits[1]);
    }
    t.d_aigc_out = uniform_bits(params.d_gen_range_mbits[0], params.d_gen_range_mbits[1]);
    t.d_ve_out = params.psi * t.d_ve;
    return t;
}

MegcEnv::MegcEnv(SystemParams params, EnvOptions options)
    : params_(std::move(params)), options_(std::move(options)), rng_(0) {
    params_.validate();
    baseline_.h_comp_off = params_.pathloss_gain(params_.dist_comp_m);
    baseline_.h_ve_off = params_.pathloss_gain(params_.dist_ve_m);
    baseline_.h_aigc_back = params_.pathloss_gain(params_.dist_aigc_m);
    baseline_.h_ve_back = baseline_.h_ve_off;
    d_comp_scale_bits_ = params_.d_comp_range_mbits[1] * 1e6;
    d_ve_scale_bits_ = params_.d_ve_range_mbits[1] * 1e6;
}

State MegcEnv::make_state(const ChannelState& channel, const TaskArrivals& tasks,
                          int slot) const {
    State s;
    s.channel_norm = {channel.h_comp_off / baseline_.h_comp_off,
                      channel.h_ve_off / baseline_.h_ve_off,
                      channel.h_aigc_back / baseline_.h_aigc_back,
                      channel.h_ve_back / baseline_.h_ve_back};
    s.d_comp_norm = tasks.d_comp / d_comp_scale_bits_;
    s.d_ve_norm = tasks.d_ve / d_ve_scale_bits_;
    s.slot = slot;
    return s;
}

ChannelState MegcEnv::denormalize_channel(const std::array<double, 4>& channel_norm) const {
    ChannelState c;
    c.h_comp_off = channel_norm[0] * baseline_.h_comp_off;
    c.h_ve_off = channel_norm[1] * baseline_.h_ve_off;
    c.h_aigc_back = channel_norm[2] * baseline_.h_aigc_back;
    c.h_ve_back = channel_norm[3] * baseline_.h_ve_back;
    return c;
}

std::array<double, 2> MegcEnv::denormalize_volumes(double d_comp_norm, double d_ve_norm) const {
    return {d_comp_norm * d_comp_scale_bits_, d_ve_norm * d_ve_scale_bits_};
}

void MegcEnv::draw_slot() {
    channel_ = sample_channel(params_, rng_, options_.fading);
    tasks_ = sample_tasks(params_, options_.task_distribution, rng_);
}

State MegcEnv::reset(std::uint64_t seed) {
    rng_ = RandomStream(seed);
    slot_ = 1;
    active_ = true;
    draw_slot();
    return make_state(channel_, tasks_, slot_);
}

MegcEnv::StepResult MegcEnv::step(const Action& action) {
    if (!active_) throw std::logic_error("step() on finished or unreset episode");
    action.validate();

    StepResult r;
    r.breakdown = slot_latency(action, channel_, tasks_, params_);
    double capped = std::min(r.breakdown.slot_total, options_.latency_cap_s);
    r.reward = -capped / options_.reward_scale_s;
    r.done = (slot_ >= params_.t_horizon);

    // Draw the successor slot even when done: the terminal transition
    // still needs a bootstrap target.
    slot_ += 1;
    draw_slot();
    r.next = make_state(channel_, tasks_, slot_);
    if (r.done) active_ = false;
    return r;
}

}  // namespace megc
