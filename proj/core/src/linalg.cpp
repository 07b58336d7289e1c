#include "kyt/linalg.hpp"

#include "kyt/error.hpp"
#include "kyt/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

namespace kyt {

namespace {

double rank_threshold(const MatrixXd& a, double sigma_max, const TolerancePolicy& tol) {
    return tol.rank_rel_tol * static_cast<double>(std::max(a.rows(), a.cols())) * sigma_max;
}

Index rank_from_singular_values(const VectorXd& sv, double threshold) {
    Index r = 0;
    while (r < sv.size() && sv(r) > threshold) ++r;
    return r;
}

} // namespace

void TolerancePolicy::validate() const {
    auto in_range = [](double t) { return t > 0.0 && t < 1.0; };
    if (!in_range(rank_rel_tol) || !in_range(match_tol) || !in_range(solve_residual_tol)) {
        throw InvalidInput("TolerancePolicy: all tolerances must be in (0, 1)");
    }
}

Index numerical_rank(const MatrixXd& a, const TolerancePolicy& tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::BDCSVD<MatrixXd> svd(a);
    const VectorXd& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    return rank_from_singular_values(sv, rank_threshold(a, sv(0), tol));
}

SubspaceBasis column_space(const MatrixXd& a, const TolerancePolicy& tol) {
    SubspaceBasis out;
    out.ambient_dim = a.rows();
    if (a.rows() == 0 || a.cols() == 0) {
        out.basis = MatrixXd(a.rows(), 0);
        return out;
    }
    Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU);
    const VectorXd& sv = svd.singularValues();
    const Index r = (sv.size() == 0 || sv(0) == 0.0)
                        ? 0
                        : rank_from_singular_values(sv, rank_threshold(a, sv(0), tol));
    out.basis = svd.matrixU().leftCols(r);
    return out;
}

SubspaceBasis intersect(const SubspaceBasis& u, const SubspaceBasis& v,
                        const TolerancePolicy& tol) {
    if (u.ambient_dim != v.ambient_dim) {
        throw InvalidInput("intersect: ambient dimensions differ (" +
                           std::to_string(u.ambient_dim) + " vs " +
                           std::to_string(v.ambient_dim) + ")");
    }
    SubspaceBasis out;
    out.ambient_dim = u.ambient_dim;
    if (u.dim() == 0 || v.dim() == 0) {
        out.basis = MatrixXd(u.ambient_dim, 0);
        return out;
    }

    // Common vectors are U x = V y, i.e. null vectors of [U | -V].
    MatrixXd stacked(u.ambient_dim, u.dim() + v.dim());
    stacked.leftCols(u.dim()) = u.basis;
    stacked.rightCols(v.dim()) = -v.basis;

    Eigen::BDCSVD<MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const Index rank = rank_from_singular_values(sv, rank_threshold(stacked, sigma_max, tol));
    const Index null_dim = stacked.cols() - rank;
    if (null_dim == 0) {
        out.basis = MatrixXd(u.ambient_dim, 0);
        return out;
    }

    const MatrixXd null_basis = svd.matrixV().rightCols(null_dim);
    const MatrixXd common = u.basis * null_basis.topRows(u.dim());

    // Re-orthonormalize; the null-space decision already fixed the dimension.
    Eigen::BDCSVD<MatrixXd> ortho(common, Eigen::ComputeThinU);
    out.basis = ortho.matrixU().leftCols(std::min(null_dim, ortho.matrixU().cols()));
    return out;
}

MultiSolveResult solve_linear_multi(const MatrixXd& a, const MatrixXd& b,
                                    const TolerancePolicy& tol) {
    if (a.rows() != b.rows()) {
        throw InvalidInput("solve_linear: A has " + std::to_string(a.rows()) +
                           " rows but b has " + std::to_string(b.rows()));
    }
    MultiSolveResult out;
    if (a.cols() == 0) {
        out.solutions = MatrixXd(0, b.cols());
        out.residual = b.norm() / std::max(1.0, b.norm());
        out.is_unique = true;
        return out;
    }
    Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = rank_threshold(a, sigma_max, tol);
    const Index rank = rank_from_singular_values(sv, threshold);

    // Minimum-norm least squares: truncate the SVD at the decided rank.
    MatrixXd projected = svd.matrixU().leftCols(rank).transpose() * b;
    for (Index i = 0; i < rank; ++i) projected.row(i) /= sv(i);
    out.solutions = svd.matrixV().leftCols(rank) * projected;
    out.residual = (a * out.solutions - b).norm() / std::max(1.0, b.norm());
    out.is_unique = (rank == a.cols());
    return out;
}

LinearSolveResult solve_linear(const MatrixXd& a, const VectorXd& b,
                               const TolerancePolicy& tol) {
    MultiSolveResult multi = solve_linear_multi(a, MatrixXd(b), tol);
    return LinearSolveResult{VectorXd(multi.solutions.col(0)), multi.residual,
                             multi.is_unique};
}

namespace {

MatrixXd pseudo_inverse(const MatrixXd& a, const TolerancePolicy& tol) {
    Eigen::BDCSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const Index rank = rank_from_singular_values(sv, rank_threshold(a, sigma_max, tol));
    MatrixXd inv_scaled = svd.matrixV().leftCols(rank);
    for (Index i = 0; i < rank; ++i) inv_scaled.col(i) /= sv(i);
    return inv_scaled * svd.matrixU().leftCols(rank).transpose();
}

} // namespace

std::vector<VectorXd> simultaneous_diagonalize(const std::vector<MatrixXd>& slices,
                                               const TolerancePolicy& tol,
                                               std::uint64_t seed) {
    const int r = static_cast<int>(slices.size());
    if (r == 0) throw InvalidInput("simultaneous_diagonalize: no slices given");
    const Index n = slices[0].rows();
    for (const MatrixXd& s : slices) {
        if (s.rows() != n || s.cols() != n) {
            throw InvalidInput("simultaneous_diagonalize: slices must be square with "
                               "one common dimension");
        }
    }
    if (r > n) {
        throw InvalidInput("simultaneous_diagonalize: more slices than ambient dimension");
    }

    std::string last_failure = "diagonalization unstable";
    for (int attempt = 0; attempt < 3; ++attempt) {
        GaussianSampler gauss(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        MatrixXd g1 = MatrixXd::Zero(n, n);
        MatrixXd g2 = MatrixXd::Zero(n, n);
        for (int l = 0; l < r; ++l) {
            g1 += gauss() * slices[l];
            g2 += gauss() * slices[l];
        }

        const MatrixXd k = g1 * pseudo_inverse(g2, tol);
        Eigen::EigenSolver<MatrixXd> eig(k);
        if (eig.info() != Eigen::Success) {
            last_failure = "diagonalization unstable";
            continue;
        }

        std::vector<Index> order(n);
        std::iota(order.begin(), order.end(), Index{0});
        const Eigen::VectorXcd values = eig.eigenvalues();
        std::sort(order.begin(), order.end(), [&](Index a, Index b) {
            return std::abs(values(a)) > std::abs(values(b));
        });

        const double top_scale = std::abs(values(order[0]));
        // The selected r eigenvalues must dominate the rest.
        if (r < n && std::abs(values(order[r])) > tol.match_tol * std::max(1.0, top_scale)) {
            last_failure = "diagonalization unstable";
            continue;
        }

        bool complex_violation = false;
        for (int i = 0; i < r; ++i) {
            const std::complex<double> lambda = values(order[i]);
            if (std::abs(lambda.imag()) > tol.match_tol * std::max(1.0, std::abs(lambda))) {
                complex_violation = true;
            }
        }
        if (complex_violation) {
            last_failure = "not simultaneously diagonalizable";
            continue;
        }

        bool gap_violation = false;
        for (int i = 0; i < r && !gap_violation; ++i) {
            for (int j = i + 1; j < r; ++j) {
                if (std::abs(values(order[i]) - values(order[j])) <=
                    tol.match_tol * std::max(1.0, top_scale)) {
                    gap_violation = true;
                    break;
                }
            }
        }
        if (gap_violation) {
            last_failure = "diagonalization unstable";
            continue;
        }

        std::vector<VectorXd> out;
        out.reserve(r);
        for (int i = 0; i < r; ++i) {
            Eigen::VectorXcd vec = eig.eigenvectors().col(order[i]);
            Index max_idx = 0;
            vec.cwiseAbs().maxCoeff(&max_idx);
            const std::complex<double> pivot = vec(max_idx);
            vec /= (pivot / std::abs(pivot)); // rotate so the pivot is real
            VectorXd real_part = vec.real();
            out.push_back(unit_with_maxmag_sign(real_part));
        }
        return out;
    }
    throw AlgorithmFail("simultaneous diagonalization", last_failure);
}

VectorXd unit_with_maxmag_sign(const VectorXd& v) {
    const double norm = v.norm();
    if (norm == 0.0) throw InvalidInput("cannot normalize the zero vector");
    Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    const double sign = v(idx) < 0.0 ? -1.0 : 1.0;
    return v * (sign / norm);
}

MatrixXd unit_with_maxmag_sign(const MatrixXd& m) {
    const double norm = m.norm();
    if (norm == 0.0) throw InvalidInput("cannot normalize the zero matrix");
    Index row = 0, col = 0;
    m.cwiseAbs().maxCoeff(&row, &col);
    const double sign = m(row, col) < 0.0 ? -1.0 : 1.0;
    return m * (sign / norm);
}

VectorXd unit_with_leading_sign(const VectorXd& v, double tol) {
    const double norm = v.norm();
    if (norm == 0.0) throw InvalidInput("cannot normalize the zero vector");
    double sign = 1.0;
    for (Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > tol * norm) {
            sign = v(i) < 0.0 ? -1.0 : 1.0;
            break;
        }
    }
    return v * (sign / norm);
}

} // namespace kyt
