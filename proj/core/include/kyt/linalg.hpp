#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace kyt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Shared numerical tolerances. All rank and equality decisions in the
/// library go through these; defaults are permissive because generic
/// instances have cleanly separated singular values at the sizes we target.
struct TolerancePolicy {
    double rank_rel_tol = 1e-9;      ///< relative singular-value cutoff for rank
    double match_tol = 1e-6;         ///< scalar-multiple / eigenvalue-gap tests
    double solve_residual_tol = 1e-8;///< acceptable relative residual of solves

    /// Throws InvalidInput unless all tolerances are in (0, 1).
    void validate() const;
};

/// Orthonormal column basis of a linear subspace (possibly 0 columns).
struct SubspaceBasis {
    Index ambient_dim = 0;
    MatrixXd basis;   // ambient_dim x dim, basis' * basis = I within 1e-12

    Index dim() const { return basis.cols(); }
};

/// Number of singular values above rank_rel_tol * max(m,n) * sigma_max.
/// The zero (or empty) matrix has rank 0.
Index numerical_rank(const MatrixXd& a, const TolerancePolicy& tol);

/// Orthonormal basis of the span of a's columns, with exactly
/// numerical_rank(a) columns.
SubspaceBasis column_space(const MatrixXd& a, const TolerancePolicy& tol);

/// Intersection of two subspaces via the null space of the stacked system
/// [u.basis | -v.basis]; the null-space dimension (decided by the rank
/// tolerance) is the intersection dimension.
SubspaceBasis intersect(const SubspaceBasis& u, const SubspaceBasis& v,
                        const TolerancePolicy& tol);

struct LinearSolveResult {
    VectorXd solution;   // minimum-norm least-squares solution
    double residual;     // |A x - b| / max(1, |b|)
    bool is_unique;      // numerical_rank(A) == number of columns
};

/// Minimum-norm least-squares solve. Never throws on rank deficiency; the
/// caller decides failure via residual / is_unique.
LinearSolveResult solve_linear(const MatrixXd& a, const VectorXd& b,
                               const TolerancePolicy& tol);

/// Multi-RHS variant sharing one factorization.
struct MultiSolveResult {
    MatrixXd solutions;  // one column per right-hand side
    double residual;     // Frobenius: |A X - B|_F / max(1, |B|_F)
    bool is_unique;
};
MultiSolveResult solve_linear_multi(const MatrixXd& a, const MatrixXd& b,
                                    const TolerancePolicy& tol);

constexpr std::uint64_t kDefaultDiagSeed = 0x6b79746e736f7264ULL;

/// Given matrices spanning span{z_m z_m'} for linearly independent vectors
/// z_m, recovers unit vectors w_m with w_m w_m' proportional to z_m z_m'.
///
/// Implementation: eigendecompose G1 * pinv(G2) for two seeded random linear
/// combinations G1, G2 of the slices; the eigenvectors of the r dominant
/// eigenvalues are the z_m. Retries up to 3 reseeds when the eigenvalue gap
/// is below match_tol, then throws AlgorithmFail("diagonalization unstable");
/// eigenvalues complex beyond match_tol throw
/// AlgorithmFail("not simultaneously diagonalizable").
std::vector<VectorXd> simultaneous_diagonalize(const std::vector<MatrixXd>& slices,
                                               const TolerancePolicy& tol,
                                               std::uint64_t seed = kDefaultDiagSeed);

/// v / |v| with the sign fixed so the largest-magnitude entry is positive.
VectorXd unit_with_maxmag_sign(const VectorXd& v);

/// M / |M|_F with the sign fixed so the largest-magnitude entry is positive.
MatrixXd unit_with_maxmag_sign(const MatrixXd& m);

/// v / |v| signed so the first entry with |entry| > tol * |v| is positive.
VectorXd unit_with_leading_sign(const VectorXd& v, double tol = 1e-12);

} // namespace kyt
