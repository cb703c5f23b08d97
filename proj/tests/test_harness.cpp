#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "megc/harness.hpp"

using namespace megc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "megc_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

// Small config so a whole training run takes milliseconds.
ExperimentConfig tiny_config(const fs::path& out_dir) {
    ExperimentConfig cfg = default_config();
    cfg.system.t_horizon = 5;
    cfg.agent.actor_hidden = {16, 16};
    cfg.agent.critic_hidden = {16, 16};
    cfg.agent.warmup_steps = 10;
    cfg.agent.batch_size = 8;
    cfg.agent.buffer_capacity = 256;
    cfg.run.seeds = {1, 2};
    cfg.run.episodes = 10;
    cfg.run.eval_slots = 30;
    cfg.run.checkpoint_every = 4;
    cfg.run.oracle_resolution = 0.1;
    cfg.run.out_dir = out_dir.string();
    cfg.validate();
    return cfg;
}

int run_cli(const std::string& args) {
    const char* bin = std::getenv("MEGC_CLI_PATH");
    if (bin == nullptr) bin = MEGC_CLI_DEFAULT;  // set by the build
    const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("g17 formatting round-trips doubles through text") {
    for (double v : {0.0, 1.0 / 3.0, -2.5e-13, 6.02214076e23, 0.1, -0.0}) {
        CHECK(std::stod(fmt_g17(v)) == v);
    }
    CHECK(fmt_g17(0.0) == "0");
    CHECK(fmt_g17(2.0) == "2");
}

TEST_CASE("eval slots are a pure function of seed and config") {
    const ExperimentConfig cfg = default_config();
    const auto a = make_eval_slots(cfg, 50, 123);
    const auto b = make_eval_slots(cfg, 50, 123);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].channel.h_comp_off == b[i].channel.h_comp_off);
        CHECK(a[i].tasks.d_comp == b[i].tasks.d_comp);
        CHECK(a[i].tasks.d_aigc_out == b[i].tasks.d_aigc_out);
    }
    const auto c = make_eval_slots(cfg, 50, 124);
    bool differs = false;
    for (std::size_t i = 0; i < c.size(); ++i) differs |= (c[i].tasks.d_comp != a[i].tasks.d_comp);
    CHECK(differs);
    // A longer draw extends the same prefix.
    const auto d = make_eval_slots(cfg, 60, 123);
    CHECK(d[49].tasks.d_comp == a[49].tasks.d_comp);
}

TEST_CASE("training writes the expected artifacts") {
    const fs::path dir = fresh_dir("train_artifacts");
    const ExperimentConfig cfg = tiny_config(dir);
    const std::vector<TrainingLog> logs = run_training(cfg, false);
    REQUIRE(logs.size() == 2);
    for (const TrainingLog& log : logs) {
        REQUIRE(log.rows.size() == 10);
        const fs::path seed_dir = dir / ("seed_" + std::to_string(log.seed));
        CHECK(fs::exists(seed_dir / "reward_curve.csv"));
        CHECK(fs::exists(seed_dir / "checkpoint.ckpt"));
        CHECK(fs::exists(seed_dir / "checkpoint_ep4.ckpt"));
        CHECK(fs::exists(seed_dir / "checkpoint_ep8.ckpt"));
        CHECK_FALSE(fs::exists(seed_dir / "checkpoint_ep10.ckpt"));  // 10 % 4 != 0

        const auto lines = lines_of(slurp(seed_dir / "reward_curve.csv"));
        REQUIRE(lines.size() == 11);
        CHECK(lines[0] == "episode,return,lat_comp,lat_aigc,lat_ve");
        for (int ep = 1; ep <= 10; ++ep) {
            const auto row = parse_row(lines[static_cast<std::size_t>(ep)]);
            REQUIRE(row.size() == 5);
            CHECK(row[0] == ep);
            const EpisodeRow& want = log.rows[static_cast<std::size_t>(ep - 1)];
            CHECK(row[1] == want.ret);  // %.17g text is lossless
            CHECK(row[2] == want.lat_comp);
            CHECK(row[3] == want.lat_aigc);
            CHECK(row[4] == want.lat_ve);
            CHECK(want.ret < 0.0);
            CHECK(want.lat_comp > 0.0);
        }
        // Returns are finite and the noise schedule decayed.
        CHECK(log.rows.front().sigma > log.rows.back().sigma);
    }
}

TEST_CASE("retraining is byte-identical and refuses to clobber silently") {
    const fs::path dir = fresh_dir("train_rerun");
    const ExperimentConfig cfg = tiny_config(dir);
    run_training(cfg, false);
    const std::string curve1 = slurp(dir / "seed_1" / "reward_curve.csv");
    const std::string ckpt1 = slurp(dir / "seed_1" / "checkpoint.ckpt");

    CHECK_THROWS_AS(run_training(cfg, false), ArtifactExists);

    run_training(cfg, true);
    CHECK(slurp(dir / "seed_1" / "reward_curve.csv") == curve1);
    CHECK(slurp(dir / "seed_1" / "checkpoint.ckpt") == ckpt1);
}

TEST_CASE("policies in a comparison see identical slots") {
    const fs::path dir = fresh_dir("paired_eval");
    const ExperimentConfig cfg = tiny_config(dir);
    const auto slots = make_eval_slots(cfg, cfg.run.eval_slots, cfg.run.eval_seed);
    const LatencyReport fra = evaluate_policy(cfg, slots, "fra");
    const LatencyReport rra = evaluate_policy(cfg, slots, "rra");
    REQUIRE(fra.records.size() == slots.size());
    REQUIRE(rra.records.size() == slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        CHECK(fra.records[i].slot == static_cast<int>(i) + 1);
        CHECK(fra.records[i].channel.h_comp_off == rra.records[i].channel.h_comp_off);
        CHECK(fra.records[i].channel.h_ve_back == rra.records[i].channel.h_ve_back);
        CHECK(fra.records[i].tasks.d_comp == rra.records[i].tasks.d_comp);
        CHECK(fra.records[i].tasks.d_ve_out == rra.records[i].tasks.d_ve_out);
        // The fixed policy plays the same action every slot.
        CHECK(fra.records[i].action.as_vector() == fra_policy(cfg.fra).as_vector());
    }
    // Running means match a direct recomputation.
    double total = 0.0;
    for (const SlotRecord& r : fra.records) total += r.breakdown.slot_total;
    CHECK(fra.mean_total == doctest::Approx(total / 30.0).epsilon(1e-12));
    CHECK(fra.mean_total ==
          doctest::Approx(fra.mean_comp + fra.mean_aigc + fra.mean_ve).epsilon(1e-9));
}

TEST_CASE("the learned policy evaluates from a checkpoint") {
    const fs::path dir = fresh_dir("lara_eval");
    const ExperimentConfig cfg = tiny_config(dir);
    run_training(cfg, false);
    const auto slots = make_eval_slots(cfg, 20, cfg.run.eval_seed);

    CHECK_THROWS_AS(evaluate_policy(cfg, slots, "lara"), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_policy(cfg, slots, "lara", (dir / "missing.ckpt").string()),
                    std::invalid_argument);
    CHECK_THROWS_AS(evaluate_policy(cfg, slots, "dqn"), std::invalid_argument);

    const LatencyReport rep =
        evaluate_policy(cfg, slots, "lara", (dir / "seed_1" / "checkpoint.ckpt").string());
    REQUIRE(rep.records.size() == 20);
    for (const SlotRecord& r : rep.records) {
        CHECK(r.action.satisfies_constraints(1e-9));
        CHECK(std::isfinite(r.breakdown.slot_total));
    }
    // Deterministic: same checkpoint, same slots, same actions.
    const LatencyReport rep2 =
        evaluate_policy(cfg, slots, "lara", (dir / "seed_1" / "checkpoint.ckpt").string());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        CHECK(rep.records[i].action.as_vector() == rep2.records[i].action.as_vector());
    }
}

TEST_CASE("comparison artifacts cover every policy and the oracle wins each slot") {
    const fs::path dir = fresh_dir("compare_run");
    const ExperimentConfig cfg = tiny_config(dir);
    run_training(cfg, false);
    const std::string ckpt = (dir / "seed_1" / "checkpoint.ckpt").string();

    const std::vector<LatencyReport> reports = run_compare(cfg, ckpt, false);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].policy == "lara");
    CHECK(reports[1].policy == "fra");
    CHECK(reports[2].policy == "rra");
    CHECK(reports[3].policy == "oracle");
    for (const char* name : {"eval_lara.csv", "eval_fra.csv", "eval_rra.csv",
                             "eval_oracle.csv", "comparison.csv"}) {
        CHECK(fs::exists(dir / name));
    }

    const LatencyReport& oracle = reports[3];
    for (const LatencyReport& other : {reports[0], reports[1], reports[2]}) {
        REQUIRE(other.records.size() == oracle.records.size());
        for (std::size_t i = 0; i < oracle.records.size(); ++i) {
            CHECK(oracle.records[i].breakdown.slot_total <=
                  other.records[i].breakdown.slot_total);
        }
        CHECK(oracle.mean_total <= other.mean_total);
    }

    // The summary mirrors the in-memory reports exactly.
    const auto lines = lines_of(slurp(dir / "comparison.csv"));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "policy,mean_lat_comp,mean_lat_aigc,mean_lat_ve,mean_lat_total");
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string& line = lines[i + 1];
        const std::size_t comma = line.find(',');
        CHECK(line.substr(0, comma) == reports[i].policy);
        const auto row = parse_row(line.substr(comma + 1));
        REQUIRE(row.size() == 4);
        CHECK(row[0] == reports[i].mean_comp);
        CHECK(row[3] == reports[i].mean_total);
    }

    // The eval CSV schema is stable.
    const auto eval_lines = lines_of(slurp(dir / "eval_oracle.csv"));
    REQUIRE(eval_lines.size() == 31);
    CHECK(eval_lines[0] ==
          "slot,h_comp_off,h_ve_off,h_aigc_back,h_ve_back,d_comp,d_ve,d_aigc_out,d_ve_out,"
          "alpha_comp_off,alpha_ve_off,alpha_aigc_back,alpha_ve_back,beta,lambda,"
          "omega_comp,omega_aigc,omega_ve,lat_comp,lat_aigc,lat_ve,lat_total");
    CHECK(parse_row(eval_lines[1]).size() == 22);

    // Rerunning without overwrite refuses; with overwrite it is byte-stable.
    CHECK_THROWS_AS(run_compare(cfg, ckpt, false), ArtifactExists);
    const std::string before = slurp(dir / "eval_rra.csv");
    run_compare(cfg, ckpt, true);
    CHECK(slurp(dir / "eval_rra.csv") == before);
}

TEST_CASE("plot tables aggregate seeds with the sample-stderr formula") {
    const fs::path dir = fresh_dir("plots_synth");
    ExperimentConfig cfg = default_config();
    cfg.run.seeds = {1, 2, 3};
    cfg.run.out_dir = dir.string();

    const char* header = "episode,return,lat_comp,lat_aigc,lat_ve\n";
    const double returns[3] = {1.0, 2.0, 3.0};
    for (int s = 1; s <= 3; ++s) {
        fs::create_directories(dir / ("seed_" + std::to_string(s)));
        std::ofstream out(dir / ("seed_" + std::to_string(s)) / "reward_curve.csv");
        out << header;
        out << "1," << fmt_g17(returns[s - 1]) << ",0.5,0.25,0.125\n";
        out << "2,4,1,2,3\n";
    }

    emit_plots_csv(cfg, false);
    const auto reward = lines_of(slurp(dir / "plots" / "reward_vs_episode.csv"));
    REQUIRE(reward.size() == 3);
    CHECK(reward[0] == "episode,mean_return,stderr_return");
    const auto row1 = parse_row(reward[1]);
    CHECK(row1[0] == 1.0);
    CHECK(row1[1] == doctest::Approx(2.0).epsilon(1e-15));
    // Sample stddev of {1,2,3} is 1; stderr = 1/sqrt(3).
    CHECK(row1[2] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    const auto row2 = parse_row(reward[2]);
    CHECK(row2[1] == 4.0);
    CHECK(row2[2] == 0.0);  // identical seeds, exactly zero spread

    const auto lat = lines_of(slurp(dir / "plots" / "latency_vs_episode.csv"));
    REQUIRE(lat.size() == 3);
    CHECK(lat[0] ==
          "episode,mean_lat_comp,stderr_lat_comp,mean_lat_aigc,stderr_lat_aigc,"
          "mean_lat_ve,stderr_lat_ve");
    const auto lrow = parse_row(lat[2]);
    CHECK(lrow[1] == 1.0);
    CHECK(lrow[2] == 0.0);
    CHECK(lrow[3] == 2.0);
    CHECK(lrow[5] == 3.0);

    // No comparison summary yet, so no bar table.
    CHECK_FALSE(fs::exists(dir / "plots" / "policy_latency.csv"));
    std::ofstream(dir / "comparison.csv") << "policy,mean_lat_comp,mean_lat_aigc,mean_lat_ve,"
                                             "mean_lat_total\nfra,1,2,3,6\n";
    emit_plots_csv(cfg, true);
    CHECK(slurp(dir / "plots" / "policy_latency.csv") == slurp(dir / "comparison.csv"));

    // A single seed reports zero stderr everywhere.
    const fs::path dir1 = fresh_dir("plots_single");
    ExperimentConfig cfg1 = default_config();
    cfg1.run.seeds = {7};
    cfg1.run.out_dir = dir1.string();
    fs::create_directories(dir1 / "seed_7");
    std::ofstream(dir1 / "seed_7" / "reward_curve.csv")
        << header << "1,-3.5,0.5,0.25,0.125\n";
    emit_plots_csv(cfg1, false);
    const auto single = lines_of(slurp(dir1 / "plots" / "reward_vs_episode.csv"));
    REQUIRE(single.size() == 2);
    const auto srow = parse_row(single[1]);
    CHECK(srow[1] == -3.5);
    CHECK(srow[2] == 0.0);

    // Mismatched curves are an error, not silent truncation.
    ExperimentConfig bad = cfg;
    bad.run.seeds = {1, 2, 3, 4};
    CHECK_THROWS(emit_plots_csv(bad, true));
}

TEST_CASE("the command line maps failures to distinct exit codes") {
    const fs::path dir = fresh_dir("cli_codes");

    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 1);                       // a subcommand is required
    CHECK(run_cli("launch") == 1);                 // unknown subcommand
    CHECK(run_cli("eval") == 1);                   // --policy is required
    CHECK(run_cli("train --config " + (dir / "missing.ini").string()) == 2);
    CHECK(run_cli("eval --policy dqn --out " + (dir / "x").string()) == 2);
    CHECK(run_cli("eval --policy lara --out " + (dir / "y").string()) == 2);  // no checkpoint

    std::ofstream(dir / "bad.ini") << "[system]\nb_off_hz = fast\n";
    CHECK(run_cli("train --config " + (dir / "bad.ini").string()) == 2);
    std::ofstream(dir / "badval.ini") << "[agent]\ngamma = 2\n";
    CHECK(run_cli("train --config " + (dir / "badval.ini").string()) == 2);
}

TEST_CASE("the command line drives a full experiment end to end") {
    const fs::path dir = fresh_dir("cli_e2e");
    const fs::path out = dir / "run";
    std::ofstream(dir / "exp.ini")
        << "[system]\nt_horizon = 5\n"
        << "[agent]\nactor_hidden = 16, 16\ncritic_hidden = 16, 16\n"
        << "warmup_steps = 10\nbatch_size = 8\nbuffer_capacity = 256\n"
        << "[run]\nseeds = 3\nepisodes = 6\neval_slots = 20\ncheckpoint_every = 0\n"
        << "oracle_resolution = 0.1\nout_dir = " << out.string() << "\n";
    const std::string cfg_flag = " --config " + (dir / "exp.ini").string();

    CHECK(run_cli("train" + cfg_flag) == 0);
    CHECK(fs::exists(out / "seed_3" / "reward_curve.csv"));
    CHECK(fs::exists(out / "seed_3" / "checkpoint.ckpt"));
    CHECK_FALSE(fs::exists(out / "seed_3" / "checkpoint_ep6.ckpt"));  // 0 = final only

    CHECK(run_cli("train" + cfg_flag) == 2);  // refuses to clobber
    CHECK(run_cli("train" + cfg_flag + " --overwrite") == 0);

    const std::string ckpt = (out / "seed_3" / "checkpoint.ckpt").string();
    CHECK(run_cli("compare" + cfg_flag + " --checkpoint " + ckpt) == 0);
    CHECK(fs::exists(out / "comparison.csv"));
    CHECK(fs::exists(out / "eval_lara.csv"));

    CHECK(run_cli("plots" + cfg_flag) == 0);
    CHECK(fs::exists(out / "plots" / "reward_vs_episode.csv"));
    CHECK(fs::exists(out / "plots" / "latency_vs_episode.csv"));
    CHECK(fs::exists(out / "plots" / "policy_latency.csv"));
    CHECK(run_cli("plots" + cfg_flag) == 2);  // plots exist now
    CHECK(run_cli("plots" + cfg_flag + " --overwrite") == 0);

    // eval alone writes its table when asked for a single policy.
    CHECK(run_cli("eval --policy fra" + cfg_flag + " --overwrite") == 0);
    CHECK(fs::exists(out / "eval_fra.csv"));
}
