#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "megc/env.hpp"
#include "megc/nn.hpp"

namespace megc {

// One stored experience. The action is kept in projected form — that is
// what the critic scores; the actor's own output is recomputed when its
// gradient is needed.
struct Transition {
    std::array<double, kStateDim> s = {};
    std::array<double, kActionDim> a = {};
    double r = 0.0;
    std::array<double, kStateDim> s2 = {};
    bool terminal = false;
};

// Fixed-capacity ring. Sampling is without replacement within a batch.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return data_.size(); }
    const Transition& operator[](std::size_t i) const { return data_[i]; }

    // k distinct indices in [0, size) via Floyd's algorithm; order is a
    // deterministic function of the stream.
    std::vector<std::size_t> sample_indices(std::size_t k, RandomStream& rng) const;

private:
    std::vector<Transition> data_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
};

struct AgentConfig {
    std::vector<int> actor_hidden = {64, 64};
    std::vector<int> critic_hidden = {64, 64};
    double gamma = 0.9;
    double tau = 0.005;         // soft target blend per update
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    std::size_t batch_size = 64;
    std::size_t buffer_capacity = 100000;
    std::size_t warmup_steps = 1000;  // pure-random steps before the actor drives
    double noise_sigma = 0.2;         // exploration noise on raw logits
    double noise_decay = 0.999;       // per episode
    double noise_min = 0.01;

    void validate() const;
};

struct UpdateStats {
    bool applied = false;
    double critic_loss = 0.0;
    double actor_value = 0.0;  // mean Q(s, mu(s)) over the batch
};

// Deterministic actor-critic with target networks. Exploration noise and
// batch sampling come from a private stream seeded at construction, so a
// whole training run is a pure function of (seed, environment stream).
class DdpgAgent {
public:
    DdpgAgent(AgentConfig config, std::uint64_t seed);

    // Deterministic policy head: actor logits for a state.
    RawAction act_raw(const State& s) const;
    // Logits perturbed by N(0, sigma^2) exploration noise.
    RawAction act_noisy(const State& s);
    // Warmup behaviour: logits ~ N(0, 1), actor not consulted.
    RawAction random_raw();

    Action act(const State& s) const { return project_action(act_raw(s)); }

    double critic_value(const std::array<double, kStateDim>& s,
                        const std::array<double, kActionDim>& a) const;

    void observe(const Transition& t);
    // One gradient step on critic and actor plus soft target updates.
    // No-op (applied=false) until the buffer holds a full batch.
    UpdateStats update();

    void decay_noise();
    double noise_sigma() const { return sigma_; }
    bool warmed_up() const { return steps_seen_ >= config_.warmup_steps; }
    std::size_t steps_seen() const { return steps_seen_; }
    const AgentConfig& config() const { return config_; }
    const Mlp& actor() const { return actor_; }
    const Mlp& critic() const { return critic_; }
    const Mlp& actor_target() const { return actor_target_; }
    const Mlp& critic_target() const { return critic_target_; }

    std::size_t param_count() const { return actor_.param_count() + critic_.param_count(); }

    void save(std::ostream& os) const;
    // Restores networks, optimizer moments, and noise level; the replay
    // buffer and the private stream are not part of a checkpoint.
    void load(std::istream& is);

private:
    std::vector<double> critic_input(const std::array<double, kStateDim>& s,
                                     const std::array<double, kActionDim>& a) const;

    AgentConfig config_;
    Mlp actor_, actor_target_;
    Mlp critic_, critic_target_;
    AdamState actor_adam_, critic_adam_;
    ReplayBuffer buffer_;
    RandomStream rng_;
    double sigma_;
    std::size_t steps_seen_ = 0;
};

}  // namespace megc
