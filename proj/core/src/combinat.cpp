#include "kyt/combinat.hpp"

#include "kyt/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace kyt {

namespace {

constexpr int kMaxGround = 64;

// Pascal's triangle up to n = 64; C(64,32) still fits in uint64.
const std::array<std::array<std::uint64_t, kMaxGround + 1>, kMaxGround + 1>& pascal_table() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kMaxGround + 1>, kMaxGround + 1> t{};
        for (int n = 0; n <= kMaxGround; ++n) {
            t[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
            }
        }
        return t;
    }();
    return table;
}

} // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxGround) {
        throw InvalidInput("binomial: n must be in [0, 64], got " + std::to_string(n));
    }
    if (k < 0 || k > n) return 0;
    return pascal_table()[n][k];
}

int koszul_sign(std::span<const int> sorted_set, int element) {
    int smaller = 0;
    bool found = false;
    for (int v : sorted_set) {
        if (v < element) ++smaller;
        if (v == element) found = true;
    }
    if (!found) {
        throw InvalidInput("koszul_sign: element " + std::to_string(element) +
                           " is not in the set");
    }
    return (smaller % 2 == 0) ? 1 : -1;
}

SubsetIndexer::SubsetIndexer(int q, int p) : q_(q), p_(p) {
    if (q < 0 || q > kMaxGround || p < 0 || p > q) {
        throw InvalidInput("SubsetIndexer: need 0 <= p <= q <= 64, got p=" +
                           std::to_string(p) + " q=" + std::to_string(q));
    }
    count_ = binomial(q, p);
}

std::uint64_t SubsetIndexer::rank(std::span<const int> subset) const {
    if (static_cast<int>(subset.size()) != p_) {
        throw InvalidInput("SubsetIndexer::rank: expected a subset of size " +
                           std::to_string(p_) + ", got size " +
                           std::to_string(subset.size()));
    }
    int prev = 0;
    std::uint64_t r = 0;
    for (int i = 0; i < p_; ++i) {
        const int s = subset[i];
        if (s <= prev || s > q_) {
            throw InvalidInput(
                "SubsetIndexer::rank: subset must be strictly increasing within "
                "[1, " + std::to_string(q_) + "]");
        }
        // count subsets agreeing on the first i elements with a smaller (i+1)-th
        for (int v = prev + 1; v < s; ++v) {
            r += binomial(q_ - v, p_ - i - 1);
        }
        prev = s;
    }
    return r;
}

std::vector<int> SubsetIndexer::unrank(std::uint64_t index) const {
    if (index >= count_) {
        throw InvalidInput("SubsetIndexer::unrank: index " + std::to_string(index) +
                           " out of range [0, " + std::to_string(count_) + ")");
    }
    std::vector<int> subset(p_);
    int v = 1;
    for (int i = 0; i < p_; ++i) {
        for (;; ++v) {
            const std::uint64_t block = binomial(q_ - v, p_ - i - 1);
            if (index < block) break;
            index -= block;
        }
        subset[i] = v++;
    }
    return subset;
}

std::vector<std::vector<int>> SubsetIndexer::enumerate() const {
    std::vector<std::vector<int>> all;
    all.reserve(count_);
    for (std::uint64_t idx = 0; idx < count_; ++idx) {
        all.push_back(unrank(idx));
    }
    return all;
}

} // namespace kyt
