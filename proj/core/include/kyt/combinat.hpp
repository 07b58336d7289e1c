#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kyt {

/// Exact binomial coefficient; requires 0 <= n <= 64 (values fit in 64 bits).
std::uint64_t binomial(int n, int k);

/// Sign of an element's position inside a sorted set: (-1)^(number of
/// smaller elements of the set). Throws InvalidInput if the element is absent.
int koszul_sign(std::span<const int> sorted_set, int element);

/// Lexicographic bijection between the p-subsets of {1,...,q} and
/// {0,...,binomial(q,p)-1}. Subsets are sorted integer lists; this ordering
/// is part of the on-disk format contract for flattening matrices.
class SubsetIndexer {
public:
    SubsetIndexer(int q, int p);

    int ground_size() const { return q_; }
    int subset_size() const { return p_; }
    std::uint64_t count() const { return count_; }

    /// Rank of a sorted p-subset of {1,...,q}; validates its argument.
    std::uint64_t rank(std::span<const int> subset) const;

    /// Inverse of rank. Throws on out-of-range index.
    std::vector<int> unrank(std::uint64_t index) const;

    /// All p-subsets in lexicographic order.
    std::vector<std::vector<int>> enumerate() const;

private:
    int q_;
    int p_;
    std::uint64_t count_;
};

} // namespace kyt
