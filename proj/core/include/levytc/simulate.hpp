#pragma once

#include <cstdint>
#include <vector>

#include "levytc/symbol.hpp"
#include "levytc/vec.hpp"

namespace ltc {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    int n_paths = 1;
    /// stable-like only: jump-size threshold for the compound-Poisson
    /// decomposition variant (large jumps exact, small jumps replaced by a
    /// variance-matched Gaussian).
    double small_jump_cutoff = 1e-3;
    /// false: leaving E raises; true: freeze at the last in-E value.
    bool absorb_outside = true;
    /// false (default): direct frozen-index stable increments;
    /// true: compound-Poisson decomposition with small_jump_cutoff.
    bool stable_decomposition = false;

    void validate() const;
};

/// One seeded cadlag trajectory. Evaluation between grid points is
/// left-point piecewise-constant: X(t) = value at the greatest grid time <= t.
struct SamplePath {
    std::vector<double> times;
    std::vector<Vec> values;
    std::vector<double> jump_times;
    std::uint64_t seed = 0;

    double horizon() const { return times.empty() ? 0.0 : times.back(); }
    std::size_t index_at(double t) const;  // greatest grid index with times[i] <= t
    const Vec& at(double t) const { return values[index_at(t)]; }
};

struct Ensemble {
    Vec start;
    std::vector<SamplePath> paths;
    SimConfig config;
    std::uint64_t master_seed = 0;

    std::size_t size() const { return paths.size(); }
    double horizon() const { return paths.empty() ? 0.0 : paths.front().horizon(); }
};

/// Euler scheme driven by (b, c, F): drift + Cholesky diffusion step, exact
/// thinned compound-Poisson jumps (chi-compensated), frozen-coefficient
/// stable increments. Deterministic given the seed.
SamplePath simulate_path(const MarkovTriplet& triplet, const Vec& x0, const SimConfig& config,
                         std::uint64_t seed);

/// n_paths independent paths, seeds derived as mix_seed(master_seed, i).
/// workers > 1 fans path generation out across threads; the result is
/// identical to the serial run (paths are stored by index).
Ensemble simulate_ensemble(const MarkovTriplet& triplet, const Vec& x0, const SimConfig& config,
                           std::uint64_t master_seed, int workers = 1);

/// sup over grid points s in [t0, t0+h] of |X(s) - X(t0)|.
double path_sup_increment(const SamplePath& path, double t0, double h);

}  // namespace ltc
