#include "kyt/rank1_extract.hpp"

#include "kyt/error.hpp"

#include <Eigen/SVD>

#include <string>
#include <utility>

namespace kyt {

MatrixSubspace MatrixSubspace::validated(std::vector<MatrixXd> basis,
                                         const TolerancePolicy& tol) {
    if (basis.empty()) throw InvalidInput("MatrixSubspace: empty basis");
    MatrixSubspace space;
    space.rows = static_cast<int>(basis[0].rows());
    space.cols = static_cast<int>(basis[0].cols());
    const Index dim = static_cast<Index>(space.rows) * space.cols;
    MatrixXd stacked(dim, static_cast<Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].rows() != space.rows || basis[i].cols() != space.cols) {
            throw InvalidInput("MatrixSubspace: basis matrices have mixed shapes");
        }
        stacked.col(static_cast<Index>(i)) = basis[i].reshaped<Eigen::RowMajor>();
    }
    if (numerical_rank(stacked, tol) != static_cast<Index>(basis.size())) {
        throw InvalidInput("MatrixSubspace: basis is not linearly independent");
    }
    space.basis = std::move(basis);
    return space;
}

std::vector<MatrixXd> find_rank1_elements(const MatrixSubspace& space, int r,
                                          const TolerancePolicy& tol,
                                          std::uint64_t seed) {
    if (r < 1) throw InvalidInput("find_rank1_elements: r must be >= 1");
    if (static_cast<int>(space.basis.size()) != r) {
        throw InvalidInput("find_rank1_elements: space dimension " +
                           std::to_string(space.basis.size()) +
                           " does not equal expected count " + std::to_string(r));
    }
    const int m = space.rows, n = space.cols;
    const Index dim = static_cast<Index>(m) * n;

    // Vectorized basis (row-major), one column per generator.
    MatrixXd y(dim, r);
    for (int t = 0; t < r; ++t) {
        y.col(t) = space.basis[t].reshaped<Eigen::RowMajor>();
    }

    // Lift basis {y_s y_t' + y_t y_s', s <= t}, pairs in lexicographic order.
    const int lift_dim = r * (r + 1) / 2;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(lift_dim);
    for (int s = 0; s < r; ++s)
        for (int t = s; t < r; ++t) pairs.emplace_back(s, t);

    // Every 2x2 minor of a rank-1 element vanishes; impose those functionals
    // on the lift coordinates directly. Constraint rows are indexed by
    // (i1<i2, j1<j2); the value on lift element (s,t) is
    //   B_s(i1,j1) B_t(i2,j2) + B_t(i1,j1) B_s(i2,j2)
    // - B_s(i1,j2) B_t(i2,j1) - B_t(i1,j2) B_s(i2,j1).
    const Index minor_rows = static_cast<Index>(m) * (m - 1) / 2 *
                             (static_cast<Index>(n) * (n - 1) / 2);
    MatrixXd constraints(minor_rows, lift_dim);
    for (int col = 0; col < lift_dim; ++col) {
        const MatrixXd& bs = space.basis[pairs[col].first];
        const MatrixXd& bt = space.basis[pairs[col].second];
        Index row = 0;
        for (int i1 = 0; i1 < m; ++i1)
            for (int i2 = i1 + 1; i2 < m; ++i2)
                for (int j1 = 0; j1 < n; ++j1)
                    for (int j2 = j1 + 1; j2 < n; ++j2)
                        constraints(row++, col) =
                            bs(i1, j1) * bt(i2, j2) + bt(i1, j1) * bs(i2, j2) -
                            bs(i1, j2) * bt(i2, j1) - bt(i1, j2) * bs(i2, j1);
    }

    // Rank decision anchored to the basis scale, not the constraint matrix's
    // own largest singular value: when every generator is rank 1 the whole
    // constraint matrix is numerical noise and must count as rank 0.
    double scale = 0.0;
    for (const MatrixXd& b : space.basis) scale = std::max(scale, b.squaredNorm());
    Eigen::BDCSVD<MatrixXd> svd(constraints, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    Index rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
        const double anchor = std::max(sv(0), scale);
        const double threshold = tol.rank_rel_tol *
                                 static_cast<double>(std::max(constraints.rows(),
                                                              constraints.cols())) *
                                 anchor;
        while (rank < sv.size() && sv(rank) > threshold) ++rank;
    }
    const Index null_dim = lift_dim - rank;
    if (null_dim != r) {
        throw AlgorithmFail("rank-1 extraction",
                            "spurious intersection: minor-vanishing subspace has "
                            "dimension " + std::to_string(null_dim) + ", expected " +
                            std::to_string(r));
    }

    // Each null vector gives a symmetric coefficient matrix; the intersection
    // element is y * coeff * y'.
    std::vector<MatrixXd> slices;
    slices.reserve(r);
    for (Index u = 0; u < null_dim; ++u) {
        const VectorXd delta = svd.matrixV().col(lift_dim - null_dim + u);
        MatrixXd coeff = MatrixXd::Zero(r, r);
        for (int idx = 0; idx < lift_dim; ++idx) {
            const auto [s, t] = pairs[idx];
            if (s == t) {
                coeff(s, s) = 2.0 * delta(idx);
            } else {
                coeff(s, t) = delta(idx);
                coeff(t, s) = delta(idx);
            }
        }
        slices.push_back(y * coeff * y.transpose());
    }

    const std::vector<VectorXd> recovered = simultaneous_diagonalize(slices, tol, seed);

    std::vector<MatrixXd> out;
    out.reserve(r);
    for (const VectorXd& w : recovered) {
        MatrixXd x = w.reshaped<Eigen::RowMajor>(m, n);
        Eigen::JacobiSVD<MatrixXd> rank1_check(x);
        const VectorXd& sigma = rank1_check.singularValues();
        if (sigma.size() > 1 && sigma(1) > tol.match_tol * sigma(0)) {
            throw AlgorithmFail("rank-1 extraction",
                                "recovered element is not rank 1 (sigma2/sigma1 = " +
                                std::to_string(sigma(1) / sigma(0)) + ")");
        }
        out.push_back(unit_with_maxmag_sign(x));
    }
    return out;
}

} // namespace kyt
