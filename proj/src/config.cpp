#include "megc/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace megc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct ParseCtx {
    std::string source;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
    }
};

double to_double(const ParseCtx& ctx, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        ctx.fail("value for '" + key + "' is not a number: '" + v + "'");
    }
}

long long to_int(const ParseCtx& ctx, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        ctx.fail("value for '" + key + "' is not an integer: '" + v + "'");
    }
}

bool to_bool(const ParseCtx& ctx, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    ctx.fail("value for '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

std::array<double, 2> to_range(const ParseCtx& ctx, const std::string& key,
                               const std::string& v) {
    auto parts = split_list(v);
    if (parts.size() != 2) ctx.fail("'" + key + "' needs exactly two comma-separated values");
    return {to_double(ctx, key, parts[0]), to_double(ctx, key, parts[1])};
}

void apply_system(const ParseCtx& ctx, SystemParams& p, const std::string& key,
                  const std::string& v) {
    if (key == "b_off_hz") p.b_off_hz = to_double(ctx, key, v);
    else if (key == "b_back_hz") p.b_back_hz = to_double(ctx, key, v);
    else if (key == "p_comp_w") p.p_comp_w = to_double(ctx, key, v);
    else if (key == "p_ve_w") p.p_ve_w = to_double(ctx, key, v);
    else if (key == "p_es_w") p.p_es_w = to_double(ctx, key, v);
    else if (key == "n0_w_per_hz") p.n0_w_per_hz = to_double(ctx, key, v);
    else if (key == "f_comp_cps") p.f_comp_cps = to_double(ctx, key, v);
    else if (key == "f_es_cps") p.f_es_cps = to_double(ctx, key, v);
    else if (key == "chi_cycles_per_bit") p.chi_cycles_per_bit = to_double(ctx, key, v);
    else if (key == "xi") p.xi = to_double(ctx, key, v);
    else if (key == "zeta") p.zeta = to_double(ctx, key, v);
    else if (key == "psi") p.psi = to_double(ctx, key, v);
    else if (key == "dist_comp_m") p.dist_comp_m = to_double(ctx, key, v);
    else if (key == "dist_aigc_m") p.dist_aigc_m = to_double(ctx, key, v);
    else if (key == "dist_ve_m") p.dist_ve_m = to_double(ctx, key, v);
    else if (key == "ref_gain_db") p.ref_gain_db = to_double(ctx, key, v);
    else if (key == "pathloss_exp") p.pathloss_exp = to_double(ctx, key, v);
    else if (key == "d_comp_mean_mbits") p.d_comp_mean_mbits = to_double(ctx, key, v);
    else if (key == "d_comp_range_mbits") p.d_comp_range_mbits = to_range(ctx, key, v);
    else if (key == "d_ve_range_mbits") p.d_ve_range_mbits = to_range(ctx, key, v);
    else if (key == "d_gen_range_mbits") p.d_gen_range_mbits = to_range(ctx, key, v);
    else if (key == "t_horizon") p.t_horizon = static_cast<int>(to_int(ctx, key, v));
    else ctx.fail("unknown key '" + key + "' in [system]");
}

void apply_env(const ParseCtx& ctx, EnvOptions& e, const std::string& key,
               const std::string& v) {
    if (key == "task_distribution") {
        if (v == "uniform") e.task_distribution = TaskDistribution::Uniform;
        else if (v == "poisson") e.task_distribution = TaskDistribution::Poisson;
        else ctx.fail("task_distribution must be 'uniform' or 'poisson'");
    } else if (key == "fading") e.fading.enabled = to_bool(ctx, key, v);
    else if (key == "rician_k") e.fading.rician_k = to_double(ctx, key, v);
    else if (key == "latency_cap_s") e.latency_cap_s = to_double(ctx, key, v);
    else if (key == "reward_scale_s") e.reward_scale_s = to_double(ctx, key, v);
    else ctx.fail("unknown key '" + key + "' in [env]");
}

std::vector<int> to_int_list(const ParseCtx& ctx, const std::string& key,
                             const std::string& v) {
    std::vector<int> out;
    for (const std::string& s : split_list(v)) out.push_back(static_cast<int>(to_int(ctx, key, s)));
    if (out.empty()) ctx.fail("'" + key + "' must not be empty");
    return out;
}

void apply_agent(const ParseCtx& ctx, AgentConfig& a, const std::string& key,
                 const std::string& v) {
    if (key == "actor_hidden") a.actor_hidden = to_int_list(ctx, key, v);
    else if (key == "critic_hidden") a.critic_hidden = to_int_list(ctx, key, v);
    else if (key == "gamma") a.gamma = to_double(ctx, key, v);
    else if (key == "tau") a.tau = to_double(ctx, key, v);
    else if (key == "actor_lr") a.actor_lr = to_double(ctx, key, v);
    else if (key == "critic_lr") a.critic_lr = to_double(ctx, key, v);
    else if (key == "batch_size") a.batch_size = static_cast<std::size_t>(to_int(ctx, key, v));
    else if (key == "buffer_capacity")
        a.buffer_capacity = static_cast<std::size_t>(to_int(ctx, key, v));
    else if (key == "warmup_steps") a.warmup_steps = static_cast<std::size_t>(to_int(ctx, key, v));
    else if (key == "noise_sigma") a.noise_sigma = to_double(ctx, key, v);
    else if (key == "noise_decay") a.noise_decay = to_double(ctx, key, v);
    else if (key == "noise_min") a.noise_min = to_double(ctx, key, v);
    else ctx.fail("unknown key '" + key + "' in [agent]");
}

void apply_fra(const ParseCtx& ctx, FraConfig& f, const std::string& key,
               const std::string& v) {
    if (key == "alpha_off") f.alpha_off = to_double(ctx, key, v);
    else if (key == "alpha_back") f.alpha_back = to_double(ctx, key, v);
    else if (key == "beta") f.beta = to_double(ctx, key, v);
    else if (key == "lambda") f.lambda = to_double(ctx, key, v);
    else if (key == "omega") {
        auto parts = split_list(v);
        if (parts.size() != 3) ctx.fail("'omega' needs exactly three comma-separated values");
        for (int i = 0; i < 3; ++i) f.omega[i] = to_double(ctx, key, parts[i]);
    } else ctx.fail("unknown key '" + key + "' in [fra]");
}

void apply_run(const ParseCtx& ctx, RunConfig& r, const std::string& key,
               const std::string& v) {
    if (key == "seeds") {
        r.seeds.clear();
        for (const std::string& s : split_list(v)) {
            long long x = to_int(ctx, key, s);
            if (x < 0) ctx.fail("seeds must be non-negative");
            r.seeds.push_back(static_cast<std::uint64_t>(x));
        }
    } else if (key == "episodes") r.episodes = static_cast<int>(to_int(ctx, key, v));
    else if (key == "eval_slots") r.eval_slots = static_cast<int>(to_int(ctx, key, v));
    else if (key == "eval_seed") r.eval_seed = static_cast<std::uint64_t>(to_int(ctx, key, v));
    else if (key == "checkpoint_every")
        r.checkpoint_every = static_cast<int>(to_int(ctx, key, v));
    else if (key == "out_dir") r.out_dir = v;
    else if (key == "oracle_resolution") r.oracle_resolution = to_double(ctx, key, v);
    else if (key == "oracle_polish") r.oracle_polish = to_bool(ctx, key, v);
    else ctx.fail("unknown key '" + key + "' in [run]");
}

}  // namespace

void RunConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("run config: ") + what);
    };
    require(!seeds.empty(), "seeds must not be empty");
    require(episodes > 0, "episodes must be positive");
    require(eval_slots > 0, "eval_slots must be positive");
    require(checkpoint_every >= 0, "checkpoint_every must be non-negative");
    require(!out_dir.empty(), "out_dir must not be empty");
    require(oracle_resolution > 0.0 && oracle_resolution <= 0.5,
            "oracle_resolution must be in (0, 0.5]");
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t j = i + 1; j < seeds.size(); ++j) {
            require(seeds[i] != seeds[j], "seeds must be distinct");
        }
    }
}

void ExperimentConfig::validate() const {
    system.validate();
    agent.validate();
    run.validate();
    fra_policy(fra);  // throws std::invalid_argument on a bad fixed allocation
    if (!(env.latency_cap_s > 0.0)) throw std::invalid_argument("env: latency_cap_s must be positive");
    if (!(env.reward_scale_s > 0.0))
        throw std::invalid_argument("env: reward_scale_s must be positive");
    if (env.fading.enabled && !(env.fading.rician_k >= 0.0))
        throw std::invalid_argument("env: rician_k must be non-negative");
}

ExperimentConfig default_config() { return {}; }

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
    ExperimentConfig cfg;
    ParseCtx ctx{source_name, 0};
    std::string section;
    std::string line;
    while (std::getline(in, line)) {
        ++ctx.line;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') ctx.fail("malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section != "system" && section != "env" && section != "agent" &&
                section != "fra" && section != "run") {
                ctx.fail("unknown section [" + section + "]");
            }
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) ctx.fail("expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) ctx.fail("empty key");
        if (section.empty()) ctx.fail("key '" + key + "' outside any section");
        if (section == "system") apply_system(ctx, cfg.system, key, value);
        else if (section == "env") apply_env(ctx, cfg.env, key, value);
        else if (section == "agent") apply_agent(ctx, cfg.agent, key, value);
        else if (section == "fra") apply_fra(ctx, cfg.fra, key, value);
        else apply_run(ctx, cfg.run, key, value);
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in, path);
}

}  // namespace megc
