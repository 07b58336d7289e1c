#include "kyt/commuting.hpp"

#include "kyt/decompose.hpp"
#include "kyt/error.hpp"
#include "kyt/random.hpp"
#include "kyt/tensor.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace kyt {

namespace {

constexpr double kMaxConditionNumber = 1e8;

MatrixXd gaussian_matrix(int rows, int cols, GaussianSampler& gauss) {
    MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = gauss();
    return m;
}

double condition_number(const MatrixXd& m) {
    Eigen::JacobiSVD<MatrixXd> svd(m);
    const VectorXd& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    return smallest == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smallest;
}

MatrixXd well_conditioned_gaussian(int size, GaussianSampler& gauss) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        MatrixXd m = gaussian_matrix(size, size, gauss);
        if (condition_number(m) <= kMaxConditionNumber) return m;
    }
    throw AlgorithmFail("instance generation",
                        "could not draw a well-conditioned random matrix");
}

} // namespace

CommExtInstance generate_planted_instance(int m, int n, int r, std::uint64_t seed) {
    if (m < 1 || n < 1 || r < n) {
        throw InvalidInput("generate_planted_instance: need m >= 1 and r >= n >= 1");
    }
    GaussianSampler gauss(seed);
    CommExtInstance instance;
    instance.m = m;
    instance.n = n;
    instance.r = r;
    instance.mixing = well_conditioned_gaussian(r, gauss);
    instance.diagonals = gaussian_matrix(r, m, gauss);

    const Eigen::PartialPivLU<MatrixXd> lu(instance.mixing);
    for (int i = 0; i < m; ++i) {
        const MatrixXd z =
            lu.solve(instance.diagonals.col(i).asDiagonal() * instance.mixing);
        instance.planted.push_back(z);
        instance.visible.push_back(z.topLeftCorner(n, n));
    }
    return instance;
}

std::pair<MatrixXd, MatrixXd> extend_to_inverse_pair(const MatrixXd& u,
                                                     const MatrixXd& v,
                                                     const TolerancePolicy& tol) {
    const Index n = u.rows();
    const Index r = u.cols();
    if (v.rows() != r || v.cols() != n) {
        throw InvalidInput("extend_to_inverse_pair: shapes must be n x r and r x n");
    }
    if (r < n) throw InvalidInput("extend_to_inverse_pair: need r >= n");

    const double gap = (u * v - MatrixXd::Identity(n, n)).norm();
    if (gap > tol.solve_residual_tol * std::sqrt(static_cast<double>(std::max<Index>(n, 1)))) {
        throw InvalidInput("extend_to_inverse_pair: U V deviates from the identity by " +
                           std::to_string(gap));
    }
    if (r == n) return {u, v};

    // Columns spanning ker(U): the trailing right singular vectors.
    Eigen::BDCSVD<MatrixXd> svd(u, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    const double threshold =
        tol.rank_rel_tol * static_cast<double>(std::max(u.rows(), u.cols())) *
        (sv.size() > 0 ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
    if (r - rank != r - n) {
        throw InvalidInput("extend_to_inverse_pair: ker(U) has dimension " +
                           std::to_string(r - rank) + ", expected " +
                           std::to_string(r - n));
    }
    const MatrixXd kernel = svd.matrixV().rightCols(r - n);

    MatrixXd v_full(r, r);
    v_full.leftCols(n) = v;
    v_full.rightCols(r - n) = kernel;

    // The missing rows X of the first matrix satisfy X * [V | B] = [0 | I].
    MatrixXd rhs = MatrixXd::Zero(r, r - n);
    rhs.bottomRows(r - n) = MatrixXd::Identity(r - n, r - n);
    const Eigen::PartialPivLU<MatrixXd> lu(v_full.transpose());
    const MatrixXd added_rows = lu.solve(rhs).transpose();

    MatrixXd u_full(r, r);
    u_full.topRows(n) = u;
    u_full.bottomRows(r - n) = added_rows;
    return {u_full, v_full};
}

CommExtSolution solve_commuting_extension(const std::vector<MatrixXd>& visible, int r,
                                          std::uint64_t seed, const TolerancePolicy& tol) {
    const int m = static_cast<int>(visible.size());
    if (m < 3) {
        throw InvalidInput("solve_commuting_extension: need at least 3 matrices");
    }
    const int n = static_cast<int>(visible[0].rows());
    for (const MatrixXd& a : visible) {
        if (a.rows() != n || a.cols() != n) {
            throw InvalidInput("solve_commuting_extension: matrices must be square with "
                               "one common dimension");
        }
    }
    if (r < n) throw InvalidInput("solve_commuting_extension: need r >= n");

    const int q = (m % 2 == 1) ? m : m - 1;
    const int p = (q - 1) / 2;

    std::string last_failure;
    for (int attempt = 1; attempt <= 3; ++attempt) {
        GaussianSampler gauss(mix_seed(seed, 100 + static_cast<std::uint64_t>(attempt)));
        const MatrixXd mixer = well_conditioned_gaussian(n, gauss);
        const Eigen::PartialPivLU<MatrixXd> mixer_lu(mixer);

        Tensor3 t(m, n, n);
        for (int i = 1; i <= m; ++i) {
            const MatrixXd slice_i = mixer * visible[i - 1];
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) t.at(i, j, k) = slice_i(j - 1, k - 1);
        }

        DecompositionPlan plan;
        plan.p = p;
        plan.q = q;
        plan.r = r;
        plan.tol = tol;
        plan.seed = mix_seed(seed, static_cast<std::uint64_t>(attempt));

        CpDecomposition decomp;
        try {
            decomp = decompose(t, plan);
        } catch (const AlgorithmFail& e) {
            last_failure = e.what();
            continue;
        }

        // Rescale: find the diagonal D with M^-1 B D C = I_n, linear in the
        // r diagonal entries.
        const MatrixXd unmixed_b = mixer_lu.solve(decomp.B);  // n x r
        MatrixXd system(static_cast<Index>(n) * n, r);
        for (int l = 0; l < r; ++l) {
            const MatrixXd outer = unmixed_b.col(l) * decomp.C.col(l).transpose();
            system.col(l) = outer.reshaped<Eigen::RowMajor>();
        }
        const MatrixXd identity = MatrixXd::Identity(n, n);
        const LinearSolveResult scale_solve =
            solve_linear(system, identity.reshaped<Eigen::RowMajor>(), tol);
        if (!scale_solve.is_unique || scale_solve.residual > tol.solve_residual_tol) {
            last_failure = "diagonal rescaling system is singular or non-unique";
            continue;
        }
        const VectorXd scales = scale_solve.solution;
        if (scales.cwiseAbs().minCoeff() <=
            tol.match_tol * scales.cwiseAbs().maxCoeff()) {
            last_failure = "diagonal rescaling has a zero entry";
            continue;
        }

        const MatrixXd u_in = unmixed_b * scales.asDiagonal();      // n x r
        const MatrixXd v_in = decomp.C.transpose();                 // r x n
        std::pair<MatrixXd, MatrixXd> completed;
        try {
            completed = extend_to_inverse_pair(u_in, v_in, tol);
        } catch (const Error& e) {
            last_failure = e.what();
            continue;
        }

        CommExtSolution out;
        out.attempts = attempt;
        for (int i = 0; i < m; ++i) {
            VectorXd diag(r);
            for (int l = 0; l < r; ++l) diag(l) = decomp.A(i, l) / scales(l);
            out.extensions.push_back(completed.first * diag.asDiagonal() *
                                     completed.second);
        }
        return out;
    }
    throw AlgorithmFail("commuting extension",
                        "no mixing draw led to a valid extension; last failure: " +
                            last_failure);
}

ExtensionReport verify_extension(const std::vector<MatrixXd>& visible,
                                 const std::vector<MatrixXd>& extensions, double tol) {
    if (visible.size() != extensions.size() || visible.empty()) {
        throw InvalidInput("verify_extension: need equally many visible and extension "
                           "matrices");
    }
    const Index n = visible[0].rows();
    const Index r = extensions[0].rows();
    if (r < n) throw InvalidInput("verify_extension: extension smaller than visible block");
    for (std::size_t i = 0; i < visible.size(); ++i) {
        if (visible[i].rows() != n || visible[i].cols() != n ||
            extensions[i].rows() != r || extensions[i].cols() != r) {
            throw InvalidInput("verify_extension: inconsistent matrix shapes");
        }
    }

    ExtensionReport report;
    for (std::size_t i = 0; i < extensions.size(); ++i) {
        for (std::size_t j = i + 1; j < extensions.size(); ++j) {
            const double commutator =
                (extensions[i] * extensions[j] - extensions[j] * extensions[i]).norm();
            const double denom = extensions[i].norm() * extensions[j].norm();
            report.commutator_residual = std::max(
                report.commutator_residual, denom == 0.0 ? commutator : commutator / denom);
        }
        const double mismatch = (extensions[i].topLeftCorner(n, n) - visible[i]).norm();
        const double denom = visible[i].norm();
        report.extension_residual = std::max(
            report.extension_residual, denom == 0.0 ? mismatch : mismatch / denom);
    }
    report.pass = report.commutator_residual <= tol && report.extension_residual <= tol;
    return report;
}

std::vector<MatrixXd> block_doubling_extension(const std::vector<MatrixXd>& visible) {
    std::vector<MatrixXd> out;
    out.reserve(visible.size());
    for (const MatrixXd& a : visible) {
        const Index n = a.rows();
        if (a.cols() != n) throw InvalidInput("block_doubling_extension: need square blocks");
        MatrixXd z(2 * n, 2 * n);
        z.topLeftCorner(n, n) = a;
        z.topRightCorner(n, n) = -a;
        z.bottomLeftCorner(n, n) = a;
        z.bottomRightCorner(n, n) = -a;
        out.push_back(std::move(z));
    }
    return out;
}

} // namespace kyt
