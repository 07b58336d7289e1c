#pragma once

#include "kyt/combinat.hpp"
#include "kyt/tensor.hpp"

#include <span>
#include <utility>
#include <vector>

namespace kyt {

enum class FlatteningMode { standard, swapped };

/// Subset-indexed signed flattening of an order-3 tensor, with the index
/// bookkeeping needed to interpret rows and columns.
///
/// Standard mode: rows are (S, j) with S a p-subset of {1..q} and j in [n2];
/// columns are (U, k) with U a (p+1)-subset and k in [n3]; the entry at
/// ((S,j),(U,k)) is sign(U,i) * T_ijk when U = S + {i} and 0 otherwise.
/// Swapped mode exchanges the roles of modes 2 and 3 and uses subset sizes
/// (q-p-1, q-p). Rows are subset-major (lexicographic), coordinate-minor;
/// columns likewise. Only the first q mode-1 slices of the tensor are used.
struct FlatteningMatrix {
    MatrixXd matrix;
    SubsetIndexer row_subsets;  // size p (standard) or q-p-1 (swapped)
    SubsetIndexer col_subsets;  // size p+1 (standard) or q-p (swapped)
    int row_coord_dim;          // n2 (standard) or n3 (swapped)
    int col_coord_dim;          // n3 (standard) or n2 (swapped)
    int p, q;
    FlatteningMode mode;

    /// coord is 1-based.
    Index row_index(std::uint64_t subset_rank, int coord) const;
    Index col_index(std::uint64_t subset_rank, int coord) const;
    std::pair<std::vector<int>, int> row_label(Index row) const;
    std::pair<std::vector<int>, int> col_label(Index col) const;
};

/// The binomial(q,p) x binomial(q,p+1) matrix whose (S,U) entry is
/// sign(U,i) * a_i when U = S + {i}. Uses the first q entries of a.
MatrixXd component_matrix(const VectorXd& a, int p, int q);

/// Builds the signed flattening described on FlatteningMatrix.
/// Requires q <= n1 and 0 <= p <= p+1 <= q.
FlatteningMatrix koszul_flattening(const Tensor3& t, int p, int q,
                                   FlatteningMode mode = FlatteningMode::standard);

/// Plain flattening of an order-k tensor: rows are the multi-indices of the
/// modes in row_modes (ascending, lexicographic with the first mode slowest),
/// columns those of the complement. row_modes must be a nonempty proper
/// subset of {1..k}; data is row-major over dims.
MatrixXd trivial_flattening(std::span<const int> dims, std::span<const double> data,
                            const std::vector<int>& row_modes);
MatrixXd trivial_flattening(const Tensor3& t, const std::vector<int>& row_modes);

/// floor(q * n3 / (n2 + n3)): the subset size making the flattening as
/// square as possible.
int balanced_p(int q, int n2, int n3);

/// Best trivial-flattening rank threshold: the mode split maximizing
/// min(row dim, col dim), and that value.
std::pair<std::vector<int>, std::uint64_t> trivial_rank_threshold(std::span<const int> dims);

} // namespace kyt
