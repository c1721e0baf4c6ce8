#pragma once

#include "annuity/regime.hpp"

#include <cstdint>
#include <vector>

namespace annuity {

struct SimConfig {
    long n_paths = 100000;
    double dt = 1e-3;        // years
    double horizon = 200.0;  // years
    std::uint64_t seed = 0;
    long n_threads = 0;  // 0 = hardware concurrency; results are thread-count invariant
};

enum class PathOutcome : int { ruin = 0, safe = 1, censored = 2 };

struct PathRecord {
    long index;
    PathOutcome outcome;
    double tau;  // absorption time (horizon for censored paths)
};

struct SimResult {
    double estimate = 0.0;  // mean of e^{-lambda_s * tau} over ruined paths, 0 otherwise
    double std_err = 0.0;
    long n_ruin = 0, n_safe = 0, n_censored = 0;
    std::vector<PathRecord> paths;  // filled only when record_paths is requested
};

// Euler-Maruyama simulation of the optimally controlled wealth process.
// Deterministic for a fixed seed: each path draws from its own RNG stream
// derived from (seed, path index).
SimResult mc_simulate(const ModelParams& params, const DerivedConstants& consts,
                      const RegimeSolution& solution, PortfolioState start, const SimConfig& sim,
                      bool record_paths = false);

}  // namespace annuity
