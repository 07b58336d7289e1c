#include "kyt/sweep.hpp"

#include "kyt/error.hpp"
#include "kyt/random.hpp"
#include "kyt/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <string>
#include <thread>

namespace kyt {

void SweepConfig::validate() const {
    tol.validate();
    if (dims.empty() || q_values.empty()) {
        throw InvalidInput("sweep: dims and q grids must be nonempty");
    }
    if (r_min < 1 || r_max < r_min) {
        throw InvalidInput("sweep: need 1 <= r_min <= r_max");
    }
    if (seeds < 1) throw InvalidInput("sweep: need at least one seed");
    if (workers < 1) throw InvalidInput("sweep: need at least one worker");
    for (const auto& d : dims) {
        for (int q : q_values) {
            if (q < 1 || q > d[0]) {
                throw InvalidInput("sweep: q=" + std::to_string(q) +
                                   " out of range for n1=" + std::to_string(d[0]));
            }
            const int p = balanced_p(q, d[1], d[2]);
            const std::size_t entries = static_cast<std::size_t>(binomial(q, p)) * d[1] *
                                        static_cast<std::size_t>(binomial(q, p + 1)) * d[2];
            if (entries > entry_budget) {
                throw InvalidInput("sweep: flattening for dims (" + std::to_string(d[0]) +
                                   "," + std::to_string(d[1]) + "," + std::to_string(d[2]) +
                                   "), q=" + std::to_string(q) + " needs " +
                                   std::to_string(entries) +
                                   " entries, beyond the budget of " +
                                   std::to_string(entry_budget));
            }
        }
    }
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();

    std::vector<SweepRow> rows;
    for (const auto& d : config.dims) {
        for (int q : config.q_values) {
            for (int r = config.r_min; r <= config.r_max; ++r) {
                for (int s = 0; s < config.seeds; ++s) {
                    SweepRow row;
                    row.dims = d;
                    row.q = q;
                    row.p = balanced_p(q, d[1], d[2]);
                    row.r = r;
                    row.seed_index = s;
                    rows.push_back(row);
                }
            }
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&rows, &next, &config] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= rows.size()) return;
            SweepRow& row = rows[idx];
            const auto start = std::chrono::steady_clock::now();

            const std::uint64_t seed =
                mix_seed(config.base_seed,
                         mix_seed(static_cast<std::uint64_t>(row.dims[0]) * 1000003 +
                                      static_cast<std::uint64_t>(row.dims[1]) * 1009 +
                                      static_cast<std::uint64_t>(row.dims[2]),
                                  static_cast<std::uint64_t>(row.q) * 97 +
                                      static_cast<std::uint64_t>(row.r) * 131071 +
                                      static_cast<std::uint64_t>(row.seed_index)));
            const CpDecomposition planted = random_generic_decomposition(
                row.dims[0], row.dims[1], row.dims[2], row.r, seed);
            const Tensor3 t = assemble(planted);
            const FlatteningMatrix m = koszul_flattening(t, row.p, row.q);
            row.flattening_rank = numerical_rank(m.matrix, config.tol);
            row.expected_rank = static_cast<std::uint64_t>(row.r) * binomial(row.q - 1, row.p);
            row.additive =
                static_cast<std::uint64_t>(row.flattening_rank) == row.expected_rank;

            row.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        }
    };

    if (config.workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    SweepResult result;
    result.rows = std::move(rows);
    for (const auto& d : config.dims) {
        for (int q : config.q_values) {
            SweepSummary summary{d, q, 0};
            for (int r = config.r_min; r <= config.r_max; ++r) {
                bool all_additive = true;
                for (const SweepRow& row : result.rows) {
                    if (row.dims == d && row.q == q && row.r == r && !row.additive) {
                        all_additive = false;
                        break;
                    }
                }
                if (all_additive) summary.max_additive_r = std::max(summary.max_additive_r, r);
            }
            result.summaries.push_back(summary);
        }
    }
    return result;
}

} // namespace kyt
