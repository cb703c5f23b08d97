#include "megc/ddpg.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace megc {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : data_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::push(const Transition& t) {
    data_[head_] = t;
    head_ = (head_ + 1) % data_.size();
    if (size_ < data_.size()) ++size_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t k, RandomStream& rng) const {
    if (k > size_) throw std::invalid_argument("batch larger than buffer");
    std::vector<std::size_t> out;
    out.reserve(k);
    std::unordered_set<std::size_t> seen;
    for (std::size_t j = size_ - k; j < size_; ++j) {
        auto t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(j)));
        if (seen.count(t)) t = j;
        seen.insert(t);
        out.push_back(t);
    }
    return out;
}

void AgentConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("agent config: ") + what);
    };
    require(!actor_hidden.empty() && !critic_hidden.empty(), "hidden layers required");
    for (int h : actor_hidden) require(h > 0, "actor hidden sizes must be positive");
    for (int h : critic_hidden) require(h > 0, "critic hidden sizes must be positive");
    require(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0, 1)");
    require(tau > 0.0 && tau <= 1.0, "tau must be in (0, 1]");
    require(actor_lr >= 0.0 && critic_lr >= 0.0, "learning rates must be non-negative");
    require(batch_size > 0, "batch size must be positive");
    require(buffer_capacity >= batch_size, "buffer must hold at least one batch");
    require(noise_sigma >= 0.0 && noise_min >= 0.0, "noise levels must be non-negative");
    require(noise_decay > 0.0 && noise_decay <= 1.0, "noise decay must be in (0, 1]");
}

DdpgAgent::DdpgAgent(AgentConfig config, std::uint64_t seed)
    : config_(std::move(config)),
      buffer_(config_.buffer_capacity == 0 ? 1 : config_.buffer_capacity),
      rng_(seed),
      sigma_(config_.noise_sigma) {
    config_.validate();
    std::vector<int> adims = {static_cast<int>(kStateDim)};
    adims.insert(adims.end(), config_.actor_hidden.begin(), config_.actor_hidden.end());
    adims.push_back(static_cast<int>(kRawActionDim));
    actor_ = make_mlp(adims, Activation::Tanh, Activation::Identity, rng_);

    std::vector<int> cdims = {static_cast<int>(kStateDim + kActionDim)};
    cdims.insert(cdims.end(), config_.critic_hidden.begin(), config_.critic_hidden.end());
    cdims.push_back(1);
    critic_ = make_mlp(cdims, Activation::Relu, Activation::Identity, rng_);

    actor_target_ = actor_;
    critic_target_ = critic_;
    actor_adam_ = make_adam_state(actor_);
    critic_adam_ = make_adam_state(critic_);
}

RawAction DdpgAgent::act_raw(const State& s) const {
    std::array<double, kStateDim> in = s.to_input();
    std::vector<double> out = mlp_forward(actor_, std::vector<double>(in.begin(), in.end()));
    RawAction raw;
    for (std::size_t i = 0; i < kRawActionDim; ++i) raw.v[i] = out[i];
    return raw;
}

RawAction DdpgAgent::act_noisy(const State& s) {
    RawAction raw = act_raw(s);
    for (double& x : raw.v) x += sigma_ * rng_.normal();
    return raw;
}

RawAction DdpgAgent::random_raw() {
    RawAction raw;
    for (double& x : raw.v) x = rng_.normal();
    return raw;
}

std::vector<double> DdpgAgent::critic_input(const std::array<double, kStateDim>& s,
                                            const std::array<double, kActionDim>& a) const {
    std::vector<double> in;
    in.reserve(kStateDim + kActionDim);
    in.insert(in.end(), s.begin(), s.end());
    in.insert(in.end(), a.begin(), a.end());
    return in;
}

double DdpgAgent::critic_value(const std::array<double, kStateDim>& s,
                               const std::array<double, kActionDim>& a) const {
    return mlp_forward(critic_, critic_input(s, a))[0];
}

void DdpgAgent::observe(const Transition& t) {
    buffer_.push(t);
    ++steps_seen_;
}

UpdateStats DdpgAgent::update() {
    UpdateStats stats;
    if (steps_seen_ < config_.warmup_steps || buffer_.size() < config_.batch_size)
        return stats;

    std::vector<std::size_t> batch = buffer_.sample_indices(config_.batch_size, rng_);
    double inv_b = 1.0 / static_cast<double>(batch.size());

    // Critic: minimize mean((Q(s,a) - y)^2), targets from the frozen nets.
    // Episodes end on the clock, not in an absorbing state, so the target
    // bootstraps through terminal transitions too.
    Mlp cgrad = zeros_like(critic_);
    ForwardCache cache;
    for (std::size_t idx : batch) {
        const Transition& t = buffer_[idx];
        std::vector<double> s2(t.s2.begin(), t.s2.end());
        std::vector<double> raw2 = mlp_forward(actor_target_, s2);
        RawAction r2;
        for (std::size_t i = 0; i < kRawActionDim; ++i) r2.v[i] = raw2[i];
        std::array<double, kActionDim> a2v = project_action(r2).as_vector();
        double q2 = mlp_forward(critic_target_, critic_input(t.s2, a2v))[0];
        double y = t.r + config_.gamma * q2;

        double q = mlp_forward_cached(critic_, critic_input(t.s, t.a), cache)[0];
        double diff = q - y;
        stats.critic_loss += diff * diff * inv_b;
        mlp_backward(critic_, cache, {2.0 * diff * inv_b}, cgrad);
    }
    adam_step(critic_, cgrad, critic_adam_, config_.critic_lr);

    // Actor: maximize mean Q(s, project(actor(s))); the chain runs through
    // the projection Jacobian, critic parameters held fixed.
    Mlp agrad = zeros_like(actor_);
    ForwardCache acache;
    for (std::size_t idx : batch) {
        const Transition& t = buffer_[idx];
        std::vector<double> s(t.s.begin(), t.s.end());
        std::vector<double> rawv = mlp_forward_cached(actor_, s, acache);
        RawAction raw;
        for (std::size_t i = 0; i < kRawActionDim; ++i) raw.v[i] = rawv[i];
        std::array<double, kActionDim> av = project_action(raw).as_vector();
        double q = mlp_forward_cached(critic_, critic_input(t.s, av), cache)[0];
        stats.actor_value += q * inv_b;

        std::vector<double> dq_din = mlp_input_gradient(critic_, cache, {-inv_b});
        auto jac = projection_jacobian(raw);
        std::vector<double> graw(kRawActionDim, 0.0);
        for (std::size_t i = 0; i < kActionDim; ++i) {
            double ga = dq_din[kStateDim + i];
            for (std::size_t j = 0; j < kRawActionDim; ++j) graw[j] += ga * jac[i][j];
        }
        mlp_backward(actor_, acache, graw, agrad);
    }
    adam_step(actor_, agrad, actor_adam_, config_.actor_lr);

    soft_update(actor_target_, actor_, config_.tau);
    soft_update(critic_target_, critic_, config_.tau);

    if (!std::isfinite(stats.critic_loss) || !std::isfinite(stats.actor_value))
        throw std::runtime_error("training diverged: non-finite loss");
    stats.applied = true;
    return stats;
}

void DdpgAgent::decay_noise() {
    sigma_ = std::max(config_.noise_min, sigma_ * config_.noise_decay);
}

namespace {

void write_adam(std::ostream& os, const AdamState& s) {
    os << "adam " << s.t << ' ' << s.m.size() << '\n';
    for (std::size_t i = 0; i < s.m.size(); ++i)
        os << (i ? " " : "") << double_to_hex(s.m[i]);
    os << '\n';
    for (std::size_t i = 0; i < s.v.size(); ++i)
        os << (i ? " " : "") << double_to_hex(s.v[i]);
    os << '\n';
}

AdamState read_adam(std::istream& is, std::size_t expected) {
    std::string tag;
    AdamState s;
    std::size_t n = 0;
    if (!(is >> tag >> s.t >> n) || tag != "adam" || n != expected)
        throw std::runtime_error("bad checkpoint optimizer state");
    s.m.resize(n);
    s.v.resize(n);
    std::string hex;
    for (double& x : s.m) {
        if (!(is >> hex)) throw std::runtime_error("truncated optimizer state");
        x = hex_to_double(hex);
    }
    for (double& x : s.v) {
        if (!(is >> hex)) throw std::runtime_error("truncated optimizer state");
        x = hex_to_double(hex);
    }
    return s;
}

}  // namespace

void DdpgAgent::save(std::ostream& os) const {
    os << "megc-agent 1\n";
    os << "sigma " << double_to_hex(sigma_) << '\n';
    os << "steps " << steps_seen_ << '\n';
    write_mlp(os, actor_);
    write_mlp(os, critic_);
    write_mlp(os, actor_target_);
    write_mlp(os, critic_target_);
    write_adam(os, actor_adam_);
    write_adam(os, critic_adam_);
}

void DdpgAgent::load(std::istream& is) {
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "megc-agent" || version != 1)
        throw std::runtime_error("bad agent checkpoint header");
    std::string key, hex;
    if (!(is >> key >> hex) || key != "sigma") throw std::runtime_error("bad checkpoint sigma");
    sigma_ = hex_to_double(hex);
    std::size_t steps = 0;
    if (!(is >> key >> steps) || key != "steps") throw std::runtime_error("bad checkpoint steps");
    steps_seen_ = steps;
    actor_ = read_mlp(is);
    critic_ = read_mlp(is);
    actor_target_ = read_mlp(is);
    critic_target_ = read_mlp(is);
    actor_adam_ = read_adam(is, actor_.param_count());
    critic_adam_ = read_adam(is, critic_.param_count());
}

}  // namespace megc
