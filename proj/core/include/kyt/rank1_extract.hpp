#pragma once

#include "kyt/linalg.hpp"

#include <cstdint>
#include <vector>

namespace kyt {

/// Subspace of m x n matrices given by a linearly independent basis.
struct MatrixSubspace {
    int rows = 0;
    int cols = 0;
    std::vector<MatrixXd> basis;

    /// Checks shapes and that the vectorized basis has full column rank.
    static MatrixSubspace validated(std::vector<MatrixXd> basis,
                                    const TolerancePolicy& tol);
};

/// Recovers the r rank-1 matrices spanning a subspace known to be generated
/// by r rank-1 elements, returned unit-Frobenius-normalized with the
/// largest-magnitude entry positive.
///
/// Pipeline: lift the basis y_1..y_r to the symmetric products
/// {y_s y_t' + y_t y_s'}, intersect that lifted space with the vanishing
/// locus of all 2x2 minors (imposed as linear functionals on the lift
/// coefficients), and split the intersection by simultaneous
/// diagonalization. Throws AlgorithmFail("rank-1 extraction", ...) when the
/// intersection dimension is not r ("spurious intersection") or a recovered
/// element is not rank 1; instability propagates from the diagonalization.
std::vector<MatrixXd> find_rank1_elements(const MatrixSubspace& space, int r,
                                          const TolerancePolicy& tol,
                                          std::uint64_t seed = kDefaultDiagSeed);

} // namespace kyt
