#pragma once

#include "kyt/rank1_extract.hpp"
#include "kyt/rank_detect.hpp"
#include "kyt/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kyt {

/// Parameters for one decomposition run. prefix_overlap() is the number of
/// leading mode-1 coordinates the two extraction passes share; the pipeline
/// requires it to be at least 2.
struct DecompositionPlan {
    int p = 0;
    int q = 0;
    std::optional<int> r;  // empty: learn the rank from the flattening
    TolerancePolicy tol;
    std::uint64_t seed = kDefaultDiagSeed;

    int prefix_overlap() const { return std::min(p + 1, q - p); }
    void validate(int n1) const;
};

/// The sparsity pattern of the distinguished flattening column: p-subsets of
/// {1..q} contained in {1..p+1}. Exactly p+1 rows qualify.
struct SparsityPattern {
    int p, q;
    std::vector<std::vector<int>> allowed_rows;

    static SparsityPattern make(int p, int q);
};

/// Sign-corrected isomorphism from pattern coordinates to a (p+1)-vector:
/// the basis vector of the pattern row {1..p+1} minus {i} maps to
/// (-1)^(i-1) e_i. v has length binomial(q,p); entries outside the pattern
/// beyond support_tol * |v| are an error.
VectorXd pattern_to_prefix(int p, int q, const VectorXd& v, double support_tol = 1e-9);

/// One extraction pass: (prefix of the mode-1 component, mode-2 or mode-3
/// component), each unit-normalized with leading-significant-entry positive
/// sign, prefix scaled so prefix * vector' reproduces the rank-1 element.
struct ModePairs {
    std::vector<VectorXd> prefixes;      // length p+1 (standard) or q-p (swapped)
    std::vector<VectorXd> mode_vectors;  // length n2 (standard) or n3 (swapped)
};

/// Builds the flattening, intersects its column space with the pattern
/// subspace tensored with the coordinate space, maps to prefix coordinates,
/// and extracts the r rank-1 elements. flattening_rank reports the rank of
/// the flattening (a byproduct of the column-space computation).
struct SideResult {
    ModePairs pairs;
    Index flattening_rank = 0;
};
SideResult extract_side(const Tensor3& t, int p, int q, FlatteningMode mode, int r,
                        const TolerancePolicy& tol, std::uint64_t seed);

/// tau[l] is the unique index whose swapped-side prefix is a scalar multiple
/// (absolute cosine >= 1 - match_tol on the first overlap entries) of
/// standard-side prefix l; fails when any l has zero or several matches.
std::vector<int> pair_terms(const std::vector<VectorXd>& d_prefixes,
                            const std::vector<VectorXd>& f_prefixes,
                            int overlap, const TolerancePolicy& tol);

struct DecomposeReport {
    int p = 0, q = 0, r_used = 0;
    bool r_was_given = false;
    Index flattening_rank_standard = 0;
    Index flattening_rank_swapped = 0;
    std::optional<int> detected_rank;  // flattening_rank_standard / divisor if exact
    bool detection_discrepancy = false;// user-supplied r != detected_rank
    double reconstruction_residual = 0.0;
    std::vector<int> pairing;
};

struct DecomposeResult {
    CpDecomposition decomposition;
    DecomposeReport report;
};

/// Full pipeline: two extraction passes (standard and swapped), prefix
/// pairing, then one least-squares solve per mode-1 slice against the fixed
/// basis {b_l c_tau(l)'}. Mode-2/3 outputs are unit-normalized with the scale
/// folded into the mode-1 component. Failures throw AlgorithmFail with the
/// offending step named.
DecomposeResult decompose_with_report(const Tensor3& t, const DecompositionPlan& plan);
CpDecomposition decompose(const Tensor3& t, const DecompositionPlan& plan);

} // namespace kyt
