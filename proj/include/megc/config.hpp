#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "megc/baselines.hpp"
#include "megc/ddpg.hpp"
#include "megc/env.hpp"
#include "megc/system.hpp"

namespace megc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment-runner knobs. Training writes one subdirectory per seed.
struct RunConfig {
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    int episodes = 1000;
    int eval_slots = 1000;
    std::uint64_t eval_seed = 9999;  // slot stream shared by all compared policies
    int checkpoint_every = 100;      // episodes between checkpoints; 0 = final only
    std::string out_dir = "runs/default";
    double oracle_resolution = 0.05;
    bool oracle_polish = true;

    void validate() const;
};

struct ExperimentConfig {
    SystemParams system;
    EnvOptions env;
    AgentConfig agent;
    FraConfig fra;
    RunConfig run;

    void validate() const;
};

// The values used throughout the reported experiments; equals a
// default-constructed config.
ExperimentConfig default_config();

// INI-style text: [section] headers over key = value lines, full-line
// comments with '#' or ';'. Sections: system, env, agent, fra, run.
// Unknown sections or keys are hard errors carrying the line number; an
// empty file yields default_config(). The parsed config is validated.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::string& path);

}  // namespace megc
