// Experiment driver: train / eval / compare / plots over the MEGC
// simulator. Exit codes: 0 ok, 1 usage, 2 config or validation error,
// 3 runtime fault.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "megc/harness.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    int episodes = -1;
    std::string out_dir;
    std::string policy;
    std::string checkpoint;
    bool overwrite = false;
};

megc::ExperimentConfig resolve_config(const CliArgs& args) {
    megc::ExperimentConfig cfg =
        args.config_path.empty() ? megc::default_config() : megc::load_config(args.config_path);
    if (!args.seeds.empty()) cfg.run.seeds = args.seeds;
    if (args.episodes > 0) cfg.run.episodes = args.episodes;
    if (!args.out_dir.empty()) cfg.run.out_dir = args.out_dir;
    cfg.validate();
    return cfg;
}

void print_report(const megc::LatencyReport& r) {
    std::printf("%-8s mean latency (s): comp %.6f  aigc %.6f  ve %.6f  total %.6f\n",
                r.policy.c_str(), r.mean_comp, r.mean_aigc, r.mean_ve, r.mean_total);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MEGC resource-allocation experiments"};
    app.require_subcommand(1);
    CliArgs args;

    auto add_common = [&](CLI::App* sub, bool with_seed, bool with_episodes) {
        sub->add_option("--config", args.config_path, "experiment config file (INI)");
        sub->add_option("--out", args.out_dir, "output directory (overrides config)");
        sub->add_flag("--overwrite", args.overwrite, "allow clobbering existing artifacts");
        if (with_seed)
            sub->add_option("--seed", args.seeds, "training seed(s), overrides config list");
        if (with_episodes)
            sub->add_option("--episodes", args.episodes, "episodes per seed (overrides config)");
    };

    CLI::App* train = app.add_subcommand("train", "train the learned policy per seed");
    add_common(train, true, true);

    CLI::App* eval = app.add_subcommand("eval", "evaluate one policy on the shared eval slots");
    add_common(eval, false, false);
    eval->add_option("--policy", args.policy, "lara | fra | rra | oracle")->required();
    eval->add_option("--checkpoint", args.checkpoint, "actor/critic checkpoint (lara)");

    CLI::App* compare = app.add_subcommand("compare", "paired comparison of all policies");
    add_common(compare, false, false);
    compare->add_option("--checkpoint", args.checkpoint,
                        "trained checkpoint to include as 'lara'");

    CLI::App* plots = app.add_subcommand("plots", "emit figure-ready CSV tables");
    add_common(plots, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // --help exits 0, every parse fault is usage
    }

    try {
        megc::ExperimentConfig cfg = resolve_config(args);
        if (train->parsed()) {
            std::vector<megc::TrainingLog> logs = megc::run_training(cfg, args.overwrite);
            for (const megc::TrainingLog& log : logs) {
                double last = log.rows.empty() ? 0.0 : log.rows.back().ret;
                std::printf("seed %llu: %zu episodes, final return %.4f\n",
                            static_cast<unsigned long long>(log.seed), log.rows.size(), last);
            }
        } else if (eval->parsed()) {
            megc::LatencyReport rep =
                megc::run_eval(cfg, args.policy, args.checkpoint, args.overwrite);
            print_report(rep);
        } else if (compare->parsed()) {
            std::vector<megc::LatencyReport> reps =
                megc::run_compare(cfg, args.checkpoint, args.overwrite);
            for (const megc::LatencyReport& r : reps) print_report(r);
        } else if (plots->parsed()) {
            megc::emit_plots_csv(cfg, args.overwrite);
            std::printf("plot tables written under %s/plots\n", cfg.run.out_dir.c_str());
        }
    } catch (const megc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const megc::ArtifactExists& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
