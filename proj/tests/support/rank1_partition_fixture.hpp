#pragma once

#include "kyt/error.hpp"
#include "kyt/linalg.hpp"

#include <utility>
#include <vector>

namespace kyt::test {

/// For n <= r <= n^2 - n + 1, builds r linearly independent rank-1 n x n
/// matrices (as outer-product factor pairs) summing to the identity. Each
/// matrix is +/- the indicator of a grid-aligned rectangle: an all-ones
/// square minus row/column segments partitioning its off-diagonal part, plus
/// single diagonal cells; segments are split into smaller pieces until the
/// count is reached.
inline std::vector<std::pair<VectorXd, VectorXd>> rank1_partition_of_identity(int n,
                                                                              int r) {
    if (n < 1 || r < n || r > n * n - n + 1) {
        throw InvalidInput("rank1_partition_of_identity: need n <= r <= n^2-n+1");
    }

    auto unit = [n](int i) {
        VectorXd v = VectorXd::Zero(n);
        v(i) = 1.0;
        return v;
    };
    auto segment = [n](int from, int to) {  // indicator of {from..to}, 0-based
        VectorXd v = VectorXd::Zero(n);
        for (int i = from; i <= to; ++i) v(i) = 1.0;
        return v;
    };

    // Pick the square size k: with k = n the counts reach n^2 - n + 1; with
    // small k plus diagonal cells they go down to r = n.
    int k = n;
    while (k > 1 && 1 + 2 * (k - 1) + (n - k) > r) --k;

    std::vector<std::pair<VectorXd, VectorXd>> out;
    out.emplace_back(segment(0, k - 1), segment(0, k - 1));  // all-ones k x k block

    // Off-diagonal partition of the k x k block: per i, a row segment
    // {i} x {0..i-1} and a column segment {0..i-1} x {i}, subtracted.
    struct Piece {
        int fixed;        // the fixed row (or column) index
        int from, to;     // the varying range
        bool is_row;
    };
    std::vector<Piece> pieces;
    pieces.reserve(static_cast<std::size_t>(k) * k);  // no reallocation below
    for (int i = 1; i < k; ++i) {
        pieces.push_back({i, 0, i - 1, true});
        pieces.push_back({i, 0, i - 1, false});
    }
    // Split pieces until 1 + #pieces + (n - k) == r.
    const int needed = r - 1 - (n - k);
    for (std::size_t scan = 0; static_cast<int>(pieces.size()) < needed; ++scan) {
        Piece& p = pieces[scan % pieces.size()];
        if (p.from == p.to) continue;
        const Piece tail{p.fixed, p.from + 1, p.to, p.is_row};
        p.to = p.from;
        pieces.push_back(tail);
    }
    for (const Piece& p : pieces) {
        const VectorXd fixed = unit(p.fixed);
        const VectorXd range = -segment(p.from, p.to);
        if (p.is_row) out.emplace_back(fixed, range);
        else out.emplace_back(range, fixed);
    }
    for (int i = k; i < n; ++i) out.emplace_back(unit(i), unit(i));
    return out;
}

} // namespace kyt::test
