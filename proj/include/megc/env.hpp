#pragma once

#include <array>
#include <cstdint>

#include "megc/latency.hpp"
#include "megc/system.hpp"

namespace megc {

// Observation for one slot. Channel gains are normalized by their
// no-fading path-loss values and data volumes by the configured range
// maxima, so every entry is O(1); the slot index is bookkeeping only and
// is not part of the network input.
struct State {
    std::array<double, 4> channel_norm = {};  // comp_off, ve_off, aigc_back, ve_back
    double d_comp_norm = 0.0;
    double d_ve_norm = 0.0;
    int slot = 0;  // 1-based

    std::array<double, 6> to_input() const {
        return {channel_norm[0], channel_norm[1], channel_norm[2],
                channel_norm[3], d_comp_norm,     d_ve_norm};
    }
};

inline constexpr std::size_t kStateDim = 6;
inline constexpr std::size_t kRawActionDim = 7;
inline constexpr std::size_t kActionDim = 9;

// Unconstrained actor output: two pair logits (offload / backhaul
// bandwidth splits), one logit each for beta and lambda, and three logits
// for the compute-share simplex.
struct RawAction {
    std::array<double, kRawActionDim> v = {};
};

// Interior margin enforced on every projected ratio.
inline constexpr double kRatioFloor = 1e-3;

// Squashes a RawAction onto the feasible set: sigmoid for the scalar
// ratios (clamped to [floor, 1-floor]), softmax mapped affinely into the
// floor-interior simplex for the compute shares. The result satisfies all
// Action constraints exactly (sums to 1 by construction).
Action project_action(const RawAction& raw);

// d(projected)/d(raw) as a 9x7 matrix, row-major over Action::as_vector()
// order. Zero in clamped regions, exact elsewhere (the simplex map is
// differentiable everywhere).
std::array<std::array<double, kRawActionDim>, kActionDim> projection_jacobian(
    const RawAction& raw);

enum class TaskDistribution { Uniform, Poisson };

// Draws one slot's task volumes. Uniform mode: integer bits uniform over
// the configured Mbit ranges. Poisson mode: d_comp and d_ve are Poisson
// with mean d_comp_mean_mbits (in bits); the generated volume stays
// uniform. d_ve_out = psi * d_ve always.
TaskArrivals sample_tasks(const SystemParams& params, TaskDistribution mode, RandomStream& rng);

struct EnvOptions {
    TaskDistribution task_distribution = TaskDistribution::Uniform;
    FadingConfig fading;
    double latency_cap_s = 60.0;    // slot latency is capped here before reward
    double reward_scale_s = 10.0;   // reward = -min(latency, cap) / scale
};

// Episodic MDP over t_horizon slots. Channel and tasks are exogenous:
// each step scores the action on the current slot, then draws the next
// slot. One instance is single-threaded; independent instances with
// independent seeds may run in parallel.
class MegcEnv {
public:
    MegcEnv(SystemParams params, EnvOptions options);

    // Reinitializes the random stream and draws the slot-1 observation.
    State reset(std::uint64_t seed);

    struct StepResult {
        State next;
        double reward = 0.0;
        LatencyBreakdown breakdown;
        bool done = false;
    };

    // Scores `action` on the current slot and advances. The returned next
    // state is valid even on the terminal step (bootstrap target).
    // Throws std::logic_error if the episode is finished or never reset.
    StepResult step(const Action& action);

    State make_state(const ChannelState& channel, const TaskArrivals& tasks, int slot) const;
    ChannelState denormalize_channel(const std::array<double, 4>& channel_norm) const;
    // Inverse of the volume normalization, bits: {d_comp, d_ve}.
    std::array<double, 2> denormalize_volumes(double d_comp_norm, double d_ve_norm) const;

    const SystemParams& params() const { return params_; }
    const EnvOptions& options() const { return options_; }
    int horizon() const { return params_.t_horizon; }
    const ChannelState& current_channel() const { return channel_; }
    const TaskArrivals& current_tasks() const { return tasks_; }

private:
    void draw_slot();

    SystemParams params_;
    EnvOptions options_;
    ChannelState baseline_;  // no-fading path-loss gains (normalization scales)
    double d_comp_scale_bits_;
    double d_ve_scale_bits_;
    RandomStream rng_;
    ChannelState channel_;
    TaskArrivals tasks_;
    int slot_ = 0;
    bool active_ = false;
};

}  // namespace megc
