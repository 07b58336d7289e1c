#pragma once

#include "kyt/rank_detect.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace kyt {

/// Grid for an empirical rank-additivity sweep.
struct SweepConfig {
    std::vector<std::array<int, 3>> dims;  // tensor shapes (n1, n2, n3)
    std::vector<int> q_values;
    int r_min = 1;
    int r_max = 1;
    int seeds = 1;                  // number of seeds per grid point
    std::uint64_t base_seed = 1;
    TolerancePolicy tol;
    std::size_t entry_budget = 40'000'000;  // refuse flattenings beyond this
    int workers = 1;

    void validate() const;
};

struct SweepRow {
    std::array<int, 3> dims;
    int q = 0, p = 0, r = 0;
    int seed_index = 0;
    Index flattening_rank = 0;
    std::uint64_t expected_rank = 0;   // r * binomial(q-1, p)
    bool additive = false;
    double wall_ms = 0.0;
};

/// Largest r at which every seed was additive, per (dims, q).
struct SweepSummary {
    std::array<int, 3> dims;
    int q = 0;
    int max_additive_r = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summaries;
};

/// One row per (dims, q, r, seed): plants a random generic rank-r instance,
/// builds the flattening and compares its rank with r * binomial(q-1, p).
/// Deterministic given the config; rows come in grid order regardless of the
/// worker count.
SweepResult run_sweep(const SweepConfig& config);

} // namespace kyt
