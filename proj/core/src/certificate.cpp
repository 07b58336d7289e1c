#include "kyt/certificate.hpp"

#include "kyt/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace kyt {

namespace {

bool contains(const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

bool is_prefix_subset(const std::vector<int>& s, int bound) {
    return std::all_of(s.begin(), s.end(), [bound](int v) { return v <= bound; });
}

// Margin of a full-column-rank check: smallest needed singular value over
// the rank threshold (> 1 iff the matrix passes at this tolerance).
struct RankEvidence {
    bool full_column_rank;
    double margin;
};

RankEvidence column_rank_evidence(const MatrixXd& m, const TolerancePolicy& tol) {
    if (m.cols() == 0) {
        return {true, std::numeric_limits<double>::infinity()};
    }
    if (m.rows() < m.cols()) return {false, 0.0};
    Eigen::BDCSVD<MatrixXd> svd(m);
    const VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return {false, 0.0};
    const double threshold =
        tol.rank_rel_tol * static_cast<double>(std::max(m.rows(), m.cols())) * sv(0);
    const double smallest_needed = sv(m.cols() - 1);
    return {smallest_needed > threshold, smallest_needed / threshold};
}

} // namespace

MatrixXd intersection_certificate_matrix(const CpDecomposition& decomp, int p, int q,
                                         FlatteningMode mode) {
    const bool swapped = (mode == FlatteningMode::swapped);
    const int row_size = swapped ? q - p - 1 : p;
    const int prefix = row_size + 1;  // p+1 (standard) or q-p (swapped)
    if (row_size < 0 || prefix > q) throw InvalidInput("need 0 <= p <= p+1 <= q");
    if (decomp.n1() < q) {
        throw InvalidInput("intersection_certificate_matrix: mode-1 components shorter "
                           "than q");
    }
    const MatrixXd& coords = swapped ? decomp.C : decomp.B;
    const int coord_dim = static_cast<int>(coords.rows());
    const int r = decomp.rank();

    const SubsetIndexer row_subsets(q, row_size);
    const SubsetIndexer col_subsets(q, prefix);

    std::vector<std::vector<int>> rows;  // S not contained in {1..prefix}
    for (const auto& s : row_subsets.enumerate()) {
        if (!is_prefix_subset(s, prefix)) rows.push_back(s);
    }
    std::vector<std::vector<int>> cols;  // U containing 1, U != {1..prefix}
    for (const auto& u : col_subsets.enumerate()) {
        if (contains(u, 1) && !is_prefix_subset(u, prefix)) cols.push_back(u);
    }

    MatrixXd m = MatrixXd::Zero(static_cast<Index>(rows.size()) * coord_dim,
                                static_cast<Index>(cols.size()) * r);
    for (std::size_t si = 0; si < rows.size(); ++si) {
        const std::vector<int>& s = rows[si];
        for (std::size_t ui = 0; ui < cols.size(); ++ui) {
            const std::vector<int>& u = cols[ui];
            // U = S + {i} for exactly one i, if at all.
            int extra = 0, missing = 0;
            for (int v : u) {
                if (!contains(s, v)) {
                    ++missing;
                    extra = v;
                }
            }
            if (missing != 1 || !std::includes(u.begin(), u.end(), s.begin(), s.end()))
                continue;
            for (int l = 0; l < r; ++l) {
                const double factor = koszul_sign(u, extra) * decomp.A(extra - 1, l);
                for (int j = 0; j < coord_dim; ++j) {
                    m(static_cast<Index>(si) * coord_dim + j,
                      static_cast<Index>(ui) * r + l) = coords(j, l) * factor;
                }
            }
        }
    }
    return m;
}

MatrixXd lift_certificate_matrix(const CpDecomposition& decomp, int p, int q,
                                 FlatteningMode mode) {
    const bool swapped = (mode == FlatteningMode::swapped);
    const int prefix = swapped ? q - p : p + 1;
    if (prefix < 1 || prefix > q) throw InvalidInput("need 0 <= p <= p+1 <= q");
    if (decomp.n1() < prefix) {
        throw InvalidInput("lift_certificate_matrix: mode-1 components shorter than "
                           "the prefix");
    }
    const MatrixXd& coords = swapped ? decomp.C : decomp.B;
    const int n = static_cast<int>(coords.rows());
    const int r = decomp.rank();

    const Index row_count =
        static_cast<Index>(prefix) * (prefix - 1) / 2 * (static_cast<Index>(n) * (n - 1) / 2);
    const Index col_count = static_cast<Index>(r) * (r - 1) / 2;
    MatrixXd m = MatrixXd::Zero(row_count, col_count);

    const MatrixXd& a = decomp.A;
    Index col = 0;
    for (int l1 = 0; l1 < r; ++l1) {
        for (int l2 = l1 + 1; l2 < r; ++l2, ++col) {
            Index row = 0;
            for (int i1 = 0; i1 < prefix; ++i1)
                for (int i2 = i1 + 1; i2 < prefix; ++i2)
                    for (int j1 = 0; j1 < n; ++j1)
                        for (int j2 = j1 + 1; j2 < n; ++j2)
                            m(row++, col) =
                                a(i1, l1) * coords(j1, l1) * a(i2, l2) * coords(j2, l2) +
                                a(i1, l2) * coords(j1, l2) * a(i2, l1) * coords(j2, l1) -
                                a(i1, l1) * coords(j2, l1) * a(i2, l2) * coords(j1, l2) -
                                a(i1, l2) * coords(j2, l2) * a(i2, l1) * coords(j1, l1);
        }
    }
    return m;
}

UniquenessCertificate certify_uniqueness(const CpDecomposition& decomp, int p, int q,
                                         const TolerancePolicy& tol) {
    tol.validate();
    const int overlap = std::min(p + 1, q - p);
    if (overlap < 2) {
        throw InvalidInput("certify_uniqueness: min(p+1, q-p) must be >= 2");
    }
    if (decomp.n1() < q) {
        throw InvalidInput("certify_uniqueness: mode-1 components shorter than q");
    }
    const int r = decomp.rank();
    if (r < 1) throw InvalidInput("certify_uniqueness: empty decomposition");

    UniquenessCertificate cert;
    cert.p = p;
    cert.q = q;
    cert.prefix_overlap = overlap;
    cert.r = r;

    auto set = [&cert](int idx, const char* label, const char* name, bool pass,
                       double measured, double required, std::string note = "") {
        cert.conditions[idx] = ConditionRecord{label, name, pass, measured, required,
                                               std::move(note)};
    };

    // (i) leading mode-1 entry of every term is nonzero
    double min_leading = std::numeric_limits<double>::infinity();
    for (int l = 0; l < r; ++l) {
        min_leading = std::min(min_leading,
                               std::abs(decomp.A(0, l)) / decomp.A.col(l).norm());
    }
    set(0, "i", "leading_entry_nonzero", min_leading > tol.match_tol, min_leading,
        tol.match_tol);

    // (ii) the overlap-length prefixes are pairwise linearly independent
    double max_cosine = 0.0;
    for (int l1 = 0; l1 < r; ++l1) {
        for (int l2 = l1 + 1; l2 < r; ++l2) {
            const VectorXd u = decomp.A.col(l1).head(overlap);
            const VectorXd v = decomp.A.col(l2).head(overlap);
            const double denom = u.norm() * v.norm();
            const double cosine = denom == 0.0 ? 1.0 : std::abs(u.dot(v)) / denom;
            max_cosine = std::max(max_cosine, cosine);
        }
    }
    set(1, "ii", "prefixes_pairwise_independent",
        r < 2 ? true : max_cosine < 1.0 - tol.match_tol, max_cosine, 1.0 - tol.match_tol,
        r < 2 ? "vacuous (single term)" : "");

    // (iii)-(v) linear independence of the paired component families
    auto khatri_rao = [r](const MatrixXd& x, const MatrixXd& y) {
        MatrixXd out(x.rows() * y.rows(), r);
        for (int l = 0; l < r; ++l) {
            for (Index i = 0; i < x.rows(); ++i) {
                out.col(l).segment(i * y.rows(), y.rows()) = x(i, l) * y.col(l);
            }
        }
        return out;
    };
    const MatrixXd d_prefix = decomp.A.topRows(p + 1);
    const MatrixXd f_prefix = decomp.A.topRows(q - p);
    {
        const RankEvidence ev = column_rank_evidence(khatri_rao(d_prefix, decomp.B), tol);
        set(2, "iii", "prefix_b_terms_independent", ev.full_column_rank, ev.margin, 1.0);
    }
    {
        const RankEvidence ev = column_rank_evidence(khatri_rao(f_prefix, decomp.C), tol);
        set(3, "iv", "prefix_c_terms_independent", ev.full_column_rank, ev.margin, 1.0);
    }
    {
        const RankEvidence ev = column_rank_evidence(khatri_rao(decomp.B, decomp.C), tol);
        set(4, "v", "bc_terms_independent", ev.full_column_rank, ev.margin, 1.0);
    }

    // (vi)/(vii) both flattenings have rank exactly r * binomial(q-1, p)
    const Tensor3 t = assemble(decomp);
    const auto target = static_cast<double>(r * binomial(q - 1, p));
    {
        const auto rank = static_cast<double>(numerical_rank(
            koszul_flattening(t, p, q, FlatteningMode::standard).matrix, tol));
        set(5, "vi", "flattening_rank_standard", rank == target, rank, target);
    }
    {
        const auto rank = static_cast<double>(numerical_rank(
            koszul_flattening(t, p, q, FlatteningMode::swapped).matrix, tol));
        set(6, "vii", "flattening_rank_swapped", rank == target, rank, target);
    }

    // (viii)/(ix) intersection certificate matrices have full column rank
    {
        const RankEvidence ev = column_rank_evidence(
            intersection_certificate_matrix(decomp, p, q, FlatteningMode::standard), tol);
        set(7, "viii", "intersection_matrix_standard", ev.full_column_rank, ev.margin, 1.0);
    }
    {
        const RankEvidence ev = column_rank_evidence(
            intersection_certificate_matrix(decomp, p, q, FlatteningMode::swapped), tol);
        set(8, "ix", "intersection_matrix_swapped", ev.full_column_rank, ev.margin, 1.0);
    }

    // (x)/(xi) lift certificate matrices have full column rank (vacuous for r < 2)
    {
        const RankEvidence ev = column_rank_evidence(
            lift_certificate_matrix(decomp, p, q, FlatteningMode::standard), tol);
        set(9, "x", "lift_matrix_standard", ev.full_column_rank, ev.margin, 1.0,
            r < 2 ? "vacuous (no columns)" : "");
    }
    {
        const RankEvidence ev = column_rank_evidence(
            lift_certificate_matrix(decomp, p, q, FlatteningMode::swapped), tol);
        set(10, "xi", "lift_matrix_swapped", ev.full_column_rank, ev.margin, 1.0,
            r < 2 ? "vacuous (no columns)" : "");
    }

    cert.overall = std::all_of(cert.conditions.begin(), cert.conditions.end(),
                               [](const ConditionRecord& c) { return c.pass; });

    const double n2 = decomp.n2(), n3 = decomp.n3();
    cert.regime.alpha = std::max(n2 / n3, n3 / n2);
    cert.regime.q_required = (4.0 + 5.0 * cert.regime.alpha) * (1.0 + 1.0 / cert.regime.alpha);
    cert.regime.r_bound =
        (n2 + n3) * (1.0 - (3.0 + cert.regime.alpha) / q) - std::pow(q, 3) / 4.0;
    cert.regime.within = q >= cert.regime.q_required && r <= cert.regime.r_bound;
    return cert;
}

} // namespace kyt
