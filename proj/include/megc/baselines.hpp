#pragma once

#include <vector>

#include "megc/latency.hpp"
#include "megc/system.hpp"

namespace megc {

// Fixed resource allocation: every ratio pinned, defaults to even splits.
struct FraConfig {
    double alpha_off = 0.5;    // computation user's offload bandwidth share
    double alpha_back = 0.5;   // AIGC user's backhaul bandwidth share
    double beta = 0.5;
    double lambda = 0.5;
    std::array<double, 3> omega = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

Action fra_policy(const FraConfig& config = {});

// Random resource allocation: ratios uniform, compute shares a flat
// Dirichlet draw, everything mapped into the same feasible interior the
// learned policy uses.
Action rra_policy(RandomStream& rng);

struct OracleOptions {
    double resolution = 0.05;  // grid spacing on every free ratio
    bool polish = true;        // refine with coordinate descent after the grid pass
    int max_sweeps = 20;       // coordinate-descent sweeps per start
    int golden_iters = 48;     // golden-section iterations per line search
};

struct OracleResult {
    Action action;                 // best found overall (grid + polish)
    LatencyBreakdown breakdown;
    Action grid_action;            // best pure grid point, before any polish
    LatencyBreakdown grid_breakdown;
};

// Per-slot minimizer of the total latency over the six free ratios
// (offload split, backhaul split, beta, lambda, two compute shares).
// The grid pass scans the full product grid exactly — the objective
// splits into independent groups, so the scan is cheap — and always
// includes the even-split point. Polish runs golden-section coordinate
// descent from the grid optimum, the even split, and each warm start; a
// move is only accepted when it strictly improves, so the result is never
// worse than any start. Warm starts are also scored as-is, which makes
// the returned latency a true lower bound on theirs.
OracleResult oracle_per_slot(const ChannelState& channel, const TaskArrivals& tasks,
                             const SystemParams& params, const OracleOptions& options = {},
                             const std::vector<Action>& warm_starts = {});

}  // namespace megc
