#include "kyt/decompose.hpp"

#include "kyt/error.hpp"
#include "kyt/random.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace kyt {

void DecompositionPlan::validate(int n1) const {
    tol.validate();
    if (q < 1 || q > n1) {
        throw InvalidInput("plan: q=" + std::to_string(q) + " must satisfy 1 <= q <= n1=" +
                           std::to_string(n1));
    }
    if (p < 0 || p + 1 > q) {
        throw InvalidInput("plan: need 0 <= p <= p+1 <= q");
    }
    if (prefix_overlap() < 2) {
        // Degenerate flattening: the construction reduces to a plain
        // flattening and the prefix pairing has no unique solution.
        throw AlgorithmFail(
            "plan",
            "prefix overlap min(p+1, q-p) = " + std::to_string(prefix_overlap()) +
                " < 2; this parameter choice degenerates to a trivial flattening, "
                "which this pipeline does not drive. Choose p, q with "
                "min(p+1, q-p) >= 2 (q >= 3).");
    }
    if (r && *r < 1) throw InvalidInput("plan: r must be >= 1 when given");
}

SparsityPattern SparsityPattern::make(int p, int q) {
    if (p < 0 || p + 1 > q) throw InvalidInput("SparsityPattern: need 0 <= p <= p+1 <= q");
    SparsityPattern z{p, q, {}};
    // p-subsets of {1..p+1}: drop one element of {1..p+1} at a time.
    for (int drop = p + 1; drop >= 1; --drop) {
        std::vector<int> s;
        s.reserve(p);
        for (int v = 1; v <= p + 1; ++v) {
            if (v != drop) s.push_back(v);
        }
        z.allowed_rows.push_back(std::move(s));
    }
    return z;
}

VectorXd pattern_to_prefix(int p, int q, const VectorXd& v, double support_tol) {
    const SubsetIndexer rows(q, p);
    if (v.size() != static_cast<Index>(rows.count())) {
        throw InvalidInput("pattern_to_prefix: vector length " + std::to_string(v.size()) +
                           " does not match subset count " + std::to_string(rows.count()));
    }

    VectorXd out(p + 1);
    std::vector<bool> on_pattern(rows.count(), false);
    for (int i = 1; i <= p + 1; ++i) {
        std::vector<int> s;
        s.reserve(p);
        for (int x = 1; x <= p + 1; ++x) {
            if (x != i) s.push_back(x);
        }
        const std::uint64_t idx = rows.rank(s);
        on_pattern[idx] = true;
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        out(i - 1) = sign * v(static_cast<Index>(idx));
    }

    double off_pattern_sq = 0.0;
    for (std::uint64_t idx = 0; idx < rows.count(); ++idx) {
        if (!on_pattern[idx]) {
            const double x = v(static_cast<Index>(idx));
            off_pattern_sq += x * x;
        }
    }
    if (std::sqrt(off_pattern_sq) > support_tol * std::max(1e-300, v.norm())) {
        throw InvalidInput("pattern_to_prefix: vector has support outside the pattern");
    }
    return out;
}

namespace {

// (phi tensor identity) on a subset-major, coordinate-minor vector.
VectorXd pattern_to_prefix_tensored(int p, int coord_dim, const SubsetIndexer& rows,
                                    const VectorXd& v) {
    VectorXd out((p + 1) * static_cast<Index>(coord_dim));
    for (int i = 1; i <= p + 1; ++i) {
        std::vector<int> s;
        s.reserve(p);
        for (int x = 1; x <= p + 1; ++x) {
            if (x != i) s.push_back(x);
        }
        const auto idx = static_cast<Index>(rows.rank(s));
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        out.segment(static_cast<Index>(i - 1) * coord_dim, coord_dim) =
            sign * v.segment(idx * coord_dim, coord_dim);
    }
    return out;
}

} // namespace

SideResult extract_side(const Tensor3& t, int p, int q, FlatteningMode mode, int r,
                        const TolerancePolicy& tol, std::uint64_t seed) {
    if (r < 1) throw InvalidInput("extract_side: r must be >= 1");
    const char* side = mode == FlatteningMode::standard ? "standard side" : "swapped side";

    // The swapped pass runs the same construction with modes 2 and 3
    // exchanged and subset size q-p-1.
    const int p_eff = mode == FlatteningMode::standard ? p : q - p - 1;
    const int coord_dim = mode == FlatteningMode::standard ? t.n2() : t.n3();

    const FlatteningMatrix flat = koszul_flattening(t, p, q, mode);
    const SubspaceBasis colspace = column_space(flat.matrix, tol);

    // Pattern subspace tensored with the coordinate space: its basis vectors
    // are unit coordinates, already orthonormal.
    const SparsityPattern pattern = SparsityPattern::make(p_eff, q);
    SubspaceBasis pattern_space;
    pattern_space.ambient_dim = flat.matrix.rows();
    pattern_space.basis = MatrixXd::Zero(flat.matrix.rows(),
                                         static_cast<Index>(pattern.allowed_rows.size()) *
                                             coord_dim);
    Index col = 0;
    for (const std::vector<int>& s : pattern.allowed_rows) {
        const std::uint64_t subset_rank = flat.row_subsets.rank(s);
        for (int j = 1; j <= coord_dim; ++j) {
            pattern_space.basis(flat.row_index(subset_rank, j), col++) = 1.0;
        }
    }

    const SubspaceBasis common = intersect(colspace, pattern_space, tol);
    if (common.dim() != r) {
        throw AlgorithmFail(side,
                            "wrong intersection dimension: got " +
                                std::to_string(common.dim()) + ", expected r=" +
                                std::to_string(r) +
                                " (suspect certificate condition " +
                                (mode == FlatteningMode::standard ? "viii" : "ix") + ")");
    }

    std::vector<MatrixXd> prefix_space;
    prefix_space.reserve(r);
    for (Index i = 0; i < r; ++i) {
        const VectorXd mapped = pattern_to_prefix_tensored(p_eff, coord_dim,
                                                           flat.row_subsets,
                                                           common.basis.col(i));
        prefix_space.push_back(mapped.reshaped<Eigen::RowMajor>(p_eff + 1, coord_dim));
    }

    const std::vector<MatrixXd> rank1s =
        find_rank1_elements(MatrixSubspace::validated(std::move(prefix_space), tol), r,
                            tol, seed);

    SideResult out;
    out.flattening_rank = colspace.dim();
    for (const MatrixXd& x : rank1s) {
        Eigen::JacobiSVD<MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        VectorXd mode_vector = svd.matrixV().col(0);
        VectorXd prefix = svd.singularValues()(0) * svd.matrixU().col(0);
        // Unit mode vector with a positive leading significant entry; the
        // compensating sign and scale stay in the prefix.
        const VectorXd fixed = unit_with_leading_sign(mode_vector);
        const double flip = fixed.dot(mode_vector) < 0.0 ? -1.0 : 1.0;
        out.pairs.mode_vectors.push_back(fixed);
        out.pairs.prefixes.push_back(flip * prefix);
    }
    return out;
}

std::vector<int> pair_terms(const std::vector<VectorXd>& d_prefixes,
                            const std::vector<VectorXd>& f_prefixes,
                            int overlap, const TolerancePolicy& tol) {
    const int r = static_cast<int>(d_prefixes.size());
    if (static_cast<int>(f_prefixes.size()) != r) {
        throw InvalidInput("pair_terms: prefix lists have different lengths");
    }
    std::vector<int> tau(r, -1);
    std::vector<bool> taken(r, false);
    for (int l = 0; l < r; ++l) {
        if (d_prefixes[l].size() < overlap || f_prefixes[l].size() < overlap) {
            throw InvalidInput("pair_terms: prefixes shorter than the overlap");
        }
        const VectorXd d = d_prefixes[l].head(overlap);
        const double d_norm = d.norm();
        int match = -1;
        int match_count = 0;
        for (int m = 0; m < r; ++m) {
            const VectorXd f = f_prefixes[m].head(overlap);
            const double denom = d_norm * f.norm();
            if (denom == 0.0) continue;
            const double cosine = std::abs(d.dot(f)) / denom;
            if (cosine >= 1.0 - tol.match_tol) {
                match = m;
                ++match_count;
            }
        }
        if (match_count != 1 || taken[match]) {
            throw AlgorithmFail("pairing",
                                "ambiguous pairing for term " + std::to_string(l + 1) +
                                    " (" + std::to_string(match_count) +
                                    " candidates; suspect certificate condition ii)");
        }
        taken[match] = true;
        tau[l] = match;
    }
    return tau;
}

DecomposeResult decompose_with_report(const Tensor3& t, const DecompositionPlan& plan) {
    plan.validate(t.n1());
    const std::uint64_t divisor = binomial(plan.q - 1, plan.p);

    DecomposeResult result;
    DecomposeReport& report = result.report;
    report.p = plan.p;
    report.q = plan.q;
    report.r_was_given = plan.r.has_value();

    int r = 0;
    if (plan.r) {
        r = *plan.r;
    } else {
        const FlatteningMatrix m = koszul_flattening(t, plan.p, plan.q);
        const Index flattening_rank = numerical_rank(m.matrix, plan.tol);
        if (flattening_rank % static_cast<Index>(divisor) != 0) {
            throw AlgorithmFail("rank detection",
                                "rank detection abstained: flattening rank " +
                                    std::to_string(flattening_rank) +
                                    " is not a multiple of " + std::to_string(divisor));
        }
        r = static_cast<int>(flattening_rank / static_cast<Index>(divisor));
        if (r == 0) {
            throw AlgorithmFail("rank detection", "flattening rank is 0 (zero tensor?)");
        }
    }
    report.r_used = r;

    const SideResult side_b = extract_side(t, plan.p, plan.q, FlatteningMode::standard, r,
                                           plan.tol, mix_seed(plan.seed, 1));
    const SideResult side_c = extract_side(t, plan.p, plan.q, FlatteningMode::swapped, r,
                                           plan.tol, mix_seed(plan.seed, 2));
    report.flattening_rank_standard = side_b.flattening_rank;
    report.flattening_rank_swapped = side_c.flattening_rank;
    if (side_b.flattening_rank % static_cast<Index>(divisor) == 0) {
        report.detected_rank =
            static_cast<int>(side_b.flattening_rank / static_cast<Index>(divisor));
    }
    report.detection_discrepancy =
        plan.r.has_value() && (!report.detected_rank || *report.detected_rank != r);

    const std::vector<int> tau = pair_terms(side_b.pairs.prefixes, side_c.pairs.prefixes,
                                            plan.prefix_overlap(), plan.tol);
    report.pairing = tau;

    // Solve for the mode-1 components slice by slice against the fixed basis
    // {b_l c_tau(l)'}; one factorization serves all n1 right-hand sides.
    const int n1 = t.n1(), n2 = t.n2(), n3 = t.n3();
    MatrixXd basis(static_cast<Index>(n2) * n3, r);
    for (int l = 0; l < r; ++l) {
        const VectorXd& b = side_b.pairs.mode_vectors[l];
        const VectorXd& c = side_c.pairs.mode_vectors[tau[l]];
        for (int j = 0; j < n2; ++j) {
            basis.col(l).segment(static_cast<Index>(j) * n3, n3) = b(j) * c;
        }
    }
    MatrixXd rhs(static_cast<Index>(n2) * n3, n1);
    for (int i = 1; i <= n1; ++i) {
        for (int j = 1; j <= n2; ++j)
            for (int k = 1; k <= n3; ++k)
                rhs(static_cast<Index>(j - 1) * n3 + (k - 1), i - 1) = t(i, j, k);
    }

    const MultiSolveResult solve = solve_linear_multi(basis, rhs, plan.tol);
    if (!solve.is_unique) {
        throw AlgorithmFail("linear solve",
                            "non-unique linear system: the paired rank-1 basis is "
                            "rank-deficient (suspect certificate condition v)");
    }
    if (solve.residual > plan.tol.solve_residual_tol) {
        throw AlgorithmFail("linear solve",
                            "residual too large: " + std::to_string(solve.residual) +
                                " > " + std::to_string(plan.tol.solve_residual_tol));
    }
    report.reconstruction_residual = solve.residual;

    CpDecomposition& out = result.decomposition;
    out.A = solve.solutions.transpose();  // n1 x r
    out.B = MatrixXd(n2, r);
    out.C = MatrixXd(n3, r);
    for (int l = 0; l < r; ++l) {
        out.B.col(l) = side_b.pairs.mode_vectors[l];
        out.C.col(l) = side_c.pairs.mode_vectors[tau[l]];
    }
    out.validate();
    return result;
}

CpDecomposition decompose(const Tensor3& t, const DecompositionPlan& plan) {
    return decompose_with_report(t, plan).decomposition;
}

} // namespace kyt
