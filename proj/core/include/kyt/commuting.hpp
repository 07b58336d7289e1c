#pragma once

#include "kyt/linalg.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace kyt {

/// A planted commuting-extension instance: m pairwise-commuting r x r
/// matrices Z_i = R^-1 D_i R (D_i diagonal) of which only the upper-left
/// n x n blocks A_i are visible.
struct CommExtInstance {
    int m = 0, n = 0, r = 0;
    std::vector<MatrixXd> visible;   // A_i, n x n
    std::vector<MatrixXd> planted;   // Z_i, r x r (ground truth)
    MatrixXd mixing;                 // R
    MatrixXd diagonals;              // r x m, column i holds diag(D_i)
};

/// R Gaussian (resampled while its condition number exceeds 1e8), D_i
/// diagonal Gaussian; deterministic per seed. Requires r >= n >= 1, m >= 1.
CommExtInstance generate_planted_instance(int m, int n, int r, std::uint64_t seed);

/// Given U (n x r) and V (r x n) with U V = I_n, completes them to inverse
/// r x r matrices: the returned first matrix has U as its first n rows, the
/// second has V as its first n columns. The added columns of the second span
/// ker(U); the added rows of the first are then uniquely determined.
/// Throws when |UV - I| exceeds solve_residual_tol * sqrt(n) or ker(U) does
/// not have dimension r - n.
std::pair<MatrixXd, MatrixXd> extend_to_inverse_pair(const MatrixXd& u,
                                                     const MatrixXd& v,
                                                     const TolerancePolicy& tol);

struct CommExtSolution {
    std::vector<MatrixXd> extensions;  // Z~_i, r x r
    int attempts = 0;                  // random mixing matrices tried
};

/// Finds a commuting extension of the visible blocks: stacks the matrices
/// M A_i (M a random generic mixer) into an m x n x n tensor, decomposes it
/// with q = largest odd <= m and p = (q-1)/2, rescales the recovered factors
/// through a diagonal solve, and completes via extend_to_inverse_pair.
/// Retries up to 3 mixing draws on decomposition failure.
CommExtSolution solve_commuting_extension(const std::vector<MatrixXd>& visible, int r,
                                          std::uint64_t seed, const TolerancePolicy& tol);

struct ExtensionReport {
    double commutator_residual = 0.0;  // max relative pairwise commutator norm
    double extension_residual = 0.0;   // max relative upper-left block mismatch
    bool pass = false;
};

/// Checks that the candidate matrices pairwise commute and extend the
/// visible blocks, both up to tol (relative Frobenius norms).
ExtensionReport verify_extension(const std::vector<MatrixXd>& visible,
                                 const std::vector<MatrixXd>& extensions, double tol);

/// The always-available 2n extension [[A, -A], [A, -A]]; every pairwise
/// product is the zero matrix, so the commutators vanish identically.
std::vector<MatrixXd> block_doubling_extension(const std::vector<MatrixXd>& visible);

} // namespace kyt
