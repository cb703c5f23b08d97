#include "megc/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "megc/baselines.hpp"
#include "megc/ddpg.hpp"

namespace fs = std::filesystem;

namespace megc {

namespace {

// Stream salts so the agent, per-episode env streams, eval slots, and the
// RRA draw are all independent functions of the user-visible seeds.
constexpr std::uint64_t kAgentSalt = 0xA6;
constexpr std::uint64_t kEnvSalt = 0xE4;
constexpr std::uint64_t kEvalSalt = 0x4C;
constexpr std::uint64_t kRraSalt = 0x52;

void require_writable(const fs::path& p, bool overwrite) {
    if (!overwrite && fs::exists(p))
        throw ArtifactExists("refusing to overwrite " + p.string() +
                             " (pass --overwrite to allow)");
}

std::ofstream open_out(const fs::path& p, bool overwrite) {
    require_writable(p, overwrite);
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

void save_checkpoint(const DdpgAgent& agent, const fs::path& p, bool overwrite) {
    std::ofstream out = open_out(p, overwrite);
    agent.save(out);
    if (!out) throw std::runtime_error("failed writing checkpoint " + p.string());
}

void write_reward_curve(const fs::path& p, const TrainingLog& log, bool overwrite) {
    std::ofstream out = open_out(p, overwrite);
    out << "episode,return,lat_comp,lat_aigc,lat_ve\n";
    for (const EpisodeRow& r : log.rows) {
        out << r.episode << ',' << fmt_g17(r.ret) << ',' << fmt_g17(r.lat_comp) << ','
            << fmt_g17(r.lat_aigc) << ',' << fmt_g17(r.lat_ve) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + p.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// Minimal reader for our own fixed-schema curves.
std::vector<std::vector<double>> read_curve_rows(const fs::path& p, const std::string& header) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("missing artifact: " + p.string());
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw std::runtime_error("unexpected header in " + p.string());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const std::string& cell : split_csv_line(line)) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

void accumulate(LatencyReport& rep, const SlotRecord& rec) {
    rep.records.push_back(rec);
    double n = static_cast<double>(rep.records.size());
    rep.mean_comp += (rec.breakdown.comp_total - rep.mean_comp) / n;
    rep.mean_aigc += (rec.breakdown.aigc_total - rep.mean_aigc) / n;
    rep.mean_ve += (rec.breakdown.ve_total - rep.mean_ve) / n;
    rep.mean_total += (rec.breakdown.slot_total - rep.mean_total) / n;
}

void write_eval_csv(const fs::path& p, const LatencyReport& rep, bool overwrite) {
    std::ofstream out = open_out(p, overwrite);
    out << "slot,h_comp_off,h_ve_off,h_aigc_back,h_ve_back,d_comp,d_ve,d_aigc_out,d_ve_out,"
           "alpha_comp_off,alpha_ve_off,alpha_aigc_back,alpha_ve_back,beta,lambda,"
           "omega_comp,omega_aigc,omega_ve,lat_comp,lat_aigc,lat_ve,lat_total\n";
    for (const SlotRecord& r : rep.records) {
        out << r.slot << ',' << fmt_g17(r.channel.h_comp_off) << ','
            << fmt_g17(r.channel.h_ve_off) << ',' << fmt_g17(r.channel.h_aigc_back) << ','
            << fmt_g17(r.channel.h_ve_back) << ',' << fmt_g17(r.tasks.d_comp) << ','
            << fmt_g17(r.tasks.d_ve) << ',' << fmt_g17(r.tasks.d_aigc_out) << ','
            << fmt_g17(r.tasks.d_ve_out);
        for (double x : r.action.as_vector()) out << ',' << fmt_g17(x);
        out << ',' << fmt_g17(r.breakdown.comp_total) << ',' << fmt_g17(r.breakdown.aigc_total)
            << ',' << fmt_g17(r.breakdown.ve_total) << ',' << fmt_g17(r.breakdown.slot_total)
            << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<EvalSlot> make_eval_slots(const ExperimentConfig& config, int count,
                                      std::uint64_t seed) {
    RandomStream rng(derive_seed(seed, kEvalSalt));
    std::vector<EvalSlot> slots;
    slots.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        EvalSlot s;
        s.channel = sample_channel(config.system, rng, config.env.fading);
        s.tasks = sample_tasks(config.system, config.env.task_distribution, rng);
        slots.push_back(s);
    }
    return slots;
}

TrainingLog train_one_seed(const ExperimentConfig& config, std::uint64_t seed,
                           const std::string& dir, bool overwrite) {
    fs::create_directories(dir);
    const fs::path curve = fs::path(dir) / "reward_curve.csv";
    const fs::path final_ckpt = fs::path(dir) / "checkpoint.ckpt";
    require_writable(curve, overwrite);
    require_writable(final_ckpt, overwrite);

    MegcEnv env(config.system, config.env);
    DdpgAgent agent(config.agent, derive_seed(seed, kAgentSalt));
    const std::uint64_t env_base = derive_seed(seed, kEnvSalt);
    const double t = static_cast<double>(env.horizon());

    TrainingLog log;
    log.seed = seed;
    for (int ep = 1; ep <= config.run.episodes; ++ep) {
        State s = env.reset(derive_seed(env_base, static_cast<std::uint64_t>(ep)));
        EpisodeRow row;
        row.episode = ep;
        row.sigma = agent.noise_sigma();
        int updates = 0;
        for (;;) {
            RawAction raw = agent.warmed_up() ? agent.act_noisy(s) : agent.random_raw();
            Action a = project_action(raw);
            MegcEnv::StepResult res = env.step(a);
            Transition tr;
            tr.s = s.to_input();
            tr.a = a.as_vector();
            tr.r = res.reward;
            tr.s2 = res.next.to_input();
            tr.terminal = res.done;
            agent.observe(tr);
            UpdateStats us = agent.update();
            if (us.applied) {
                row.critic_loss += us.critic_loss;
                row.actor_value += us.actor_value;
                ++updates;
            }
            row.ret += res.reward;
            row.lat_comp += res.breakdown.comp_total;
            row.lat_aigc += res.breakdown.aigc_total;
            row.lat_ve += res.breakdown.ve_total;
            s = res.next;
            if (res.done) break;
        }
        row.lat_comp /= t;
        row.lat_aigc /= t;
        row.lat_ve /= t;
        if (updates > 0) {
            row.critic_loss /= updates;
            row.actor_value /= updates;
        }
        agent.decay_noise();
        log.rows.push_back(row);

        if (config.run.checkpoint_every > 0 && ep % config.run.checkpoint_every == 0) {
            save_checkpoint(agent,
                            fs::path(dir) / ("checkpoint_ep" + std::to_string(ep) + ".ckpt"),
                            overwrite);
        }
    }
    save_checkpoint(agent, final_ckpt, overwrite);
    write_reward_curve(curve, log, overwrite);
    return log;
}

std::vector<TrainingLog> run_training(const ExperimentConfig& config, bool overwrite) {
    std::vector<TrainingLog> logs;
    for (std::uint64_t seed : config.run.seeds) {
        fs::path dir = fs::path(config.run.out_dir) / ("seed_" + std::to_string(seed));
        logs.push_back(train_one_seed(config, seed, dir.string(), overwrite));
    }
    return logs;
}

LatencyReport evaluate_policy(const ExperimentConfig& config,
                              const std::vector<EvalSlot>& slots, const std::string& policy,
                              const std::string& checkpoint_path,
                              const std::vector<const LatencyReport*>& warm) {
    LatencyReport rep;
    rep.policy = policy;

    MegcEnv env(config.system, config.env);  // state normalization only
    DdpgAgent agent(config.agent, 0);
    if (policy == "lara") {
        if (checkpoint_path.empty())
            throw std::invalid_argument("policy 'lara' requires --checkpoint");
        std::ifstream in(checkpoint_path);
        if (!in) throw std::invalid_argument("checkpoint not found: " + checkpoint_path);
        agent.load(in);
    } else if (policy != "fra" && policy != "rra" && policy != "oracle") {
        throw std::invalid_argument("unknown policy '" + policy +
                                    "' (expected lara, fra, rra, or oracle)");
    }
    for (const LatencyReport* w : warm) {
        if (w->records.size() != slots.size())
            throw std::invalid_argument("warm-start report does not cover the slot set");
    }

    const Action fra = fra_policy(config.fra);
    RandomStream rra_rng(derive_seed(config.run.eval_seed, kRraSalt));
    OracleOptions oracle_opts;
    oracle_opts.resolution = config.run.oracle_resolution;
    oracle_opts.polish = config.run.oracle_polish;

    for (std::size_t i = 0; i < slots.size(); ++i) {
        const EvalSlot& slot = slots[i];
        Action a;
        if (policy == "lara") {
            a = agent.act(env.make_state(slot.channel, slot.tasks, static_cast<int>(i) + 1));
        } else if (policy == "fra") {
            a = fra;
        } else if (policy == "rra") {
            a = rra_policy(rra_rng);
        } else {
            std::vector<Action> starts;
            starts.reserve(warm.size());
            for (const LatencyReport* w : warm) starts.push_back(w->records[i].action);
            a = oracle_per_slot(slot.channel, slot.tasks, config.system, oracle_opts, starts)
                    .action;
        }
        SlotRecord rec;
        rec.slot = static_cast<int>(i) + 1;
        rec.channel = slot.channel;
        rec.tasks = slot.tasks;
        rec.action = a;
        rec.breakdown = slot_latency(a, slot.channel, slot.tasks, config.system);
        accumulate(rep, rec);
    }
    return rep;
}

LatencyReport run_eval(const ExperimentConfig& config, const std::string& policy,
                       const std::string& checkpoint_path, bool overwrite) {
    const std::vector<EvalSlot> slots =
        make_eval_slots(config, config.run.eval_slots, config.run.eval_seed);
    LatencyReport rep = evaluate_policy(config, slots, policy, checkpoint_path);
    fs::create_directories(config.run.out_dir);
    write_eval_csv(fs::path(config.run.out_dir) / ("eval_" + policy + ".csv"), rep, overwrite);
    return rep;
}

std::vector<LatencyReport> run_compare(const ExperimentConfig& config,
                                       const std::string& checkpoint_path, bool overwrite) {
    const std::vector<EvalSlot> slots =
        make_eval_slots(config, config.run.eval_slots, config.run.eval_seed);

    std::vector<LatencyReport> reports;
    if (!checkpoint_path.empty())
        reports.push_back(evaluate_policy(config, slots, "lara", checkpoint_path));
    reports.push_back(evaluate_policy(config, slots, "fra"));
    reports.push_back(evaluate_policy(config, slots, "rra"));

    std::vector<const LatencyReport*> warm;
    for (const LatencyReport& r : reports) warm.push_back(&r);
    reports.push_back(evaluate_policy(config, slots, "oracle", "", warm));

    fs::create_directories(config.run.out_dir);
    for (const LatencyReport& r : reports)
        write_eval_csv(fs::path(config.run.out_dir) / ("eval_" + r.policy + ".csv"), r,
                       overwrite);

    std::ofstream out =
        open_out(fs::path(config.run.out_dir) / "comparison.csv", overwrite);
    out << "policy,mean_lat_comp,mean_lat_aigc,mean_lat_ve,mean_lat_total\n";
    for (const LatencyReport& r : reports) {
        out << r.policy << ',' << fmt_g17(r.mean_comp) << ',' << fmt_g17(r.mean_aigc) << ','
            << fmt_g17(r.mean_ve) << ',' << fmt_g17(r.mean_total) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing comparison.csv");
    return reports;
}

void emit_plots_csv(const ExperimentConfig& config, bool overwrite) {
    const fs::path base(config.run.out_dir);
    const std::string header = "episode,return,lat_comp,lat_aigc,lat_ve";

    std::vector<std::vector<std::vector<double>>> curves;  // seed -> row -> cols
    for (std::uint64_t seed : config.run.seeds) {
        fs::path p = base / ("seed_" + std::to_string(seed)) / "reward_curve.csv";
        curves.push_back(read_curve_rows(p, header));
        if (curves.back().size() != curves.front().size())
            throw std::runtime_error("episode count mismatch across seeds in " + p.string());
    }
    const std::size_t episodes = curves.front().size();
    const double n = static_cast<double>(curves.size());

    // mean and stderr (sample stddev / sqrt(n); 0 for a single seed) of
    // column c over seeds, per episode row.
    auto stats = [&](std::size_t row, std::size_t col) {
        double mean = 0.0;
        for (const auto& c : curves) mean += c[row][col];
        mean /= n;
        double se = 0.0;
        if (curves.size() > 1) {
            double ss = 0.0;
            for (const auto& c : curves) ss += (c[row][col] - mean) * (c[row][col] - mean);
            se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        return std::pair<double, double>(mean, se);
    };

    fs::create_directories(base / "plots");
    {
        std::ofstream out = open_out(base / "plots" / "reward_vs_episode.csv", overwrite);
        out << "episode,mean_return,stderr_return\n";
        for (std::size_t r = 0; r < episodes; ++r) {
            auto [m, se] = stats(r, 1);
            out << static_cast<long long>(curves.front()[r][0]) << ',' << fmt_g17(m) << ','
                << fmt_g17(se) << '\n';
        }
    }
    {
        std::ofstream out = open_out(base / "plots" / "latency_vs_episode.csv", overwrite);
        out << "episode,mean_lat_comp,stderr_lat_comp,mean_lat_aigc,stderr_lat_aigc,"
               "mean_lat_ve,stderr_lat_ve\n";
        for (std::size_t r = 0; r < episodes; ++r) {
            out << static_cast<long long>(curves.front()[r][0]);
            for (std::size_t c = 2; c <= 4; ++c) {
                auto [m, se] = stats(r, c);
                out << ',' << fmt_g17(m) << ',' << fmt_g17(se);
            }
            out << '\n';
        }
    }
    // Bar table for the policy comparison, when a comparison has been run.
    if (fs::exists(base / "comparison.csv")) {
        std::ifstream in(base / "comparison.csv");
        std::stringstream buf;
        buf << in.rdbuf();
        std::ofstream out = open_out(base / "plots" / "policy_latency.csv", overwrite);
        out << buf.str();
    }
}

}  // namespace megc
