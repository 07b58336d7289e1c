#pragma once

#include "kyt/linalg.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace kyt {

/// Dense real order-3 tensor. Entries are stored row-major: the 1-based
/// mathematical index (i,j,k) lives at offset ((i-1)*n2 + (j-1))*n3 + (k-1).
/// All public indexing is 1-based to match the usual mathematical convention.
class Tensor3 {
public:
    Tensor3(int n1, int n2, int n3);  // zero-filled

    /// Validates length n1*n2*n3 and that every entry is finite.
    static Tensor3 from_data(int n1, int n2, int n3, std::vector<double> data);

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n3() const { return n3_; }
    std::array<int, 3> dims() const { return {n1_, n2_, n3_}; }

    double operator()(int i, int j, int k) const { return data_[offset(i, j, k)]; }
    double& at(int i, int j, int k) { return data_[offset(i, j, k)]; }

    const std::vector<double>& data() const { return data_; }
    double frobenius_norm() const;

private:
    std::size_t offset(int i, int j, int k) const;

    int n1_, n2_, n3_;
    std::vector<double> data_;
};

/// List of r rank-1 component triples; column l of A/B/C holds the l-th
/// a/b/c vector. r = 0 (empty sum) is allowed.
struct CpDecomposition {
    MatrixXd A;  // n1 x r
    MatrixXd B;  // n2 x r
    MatrixXd C;  // n3 x r

    int rank() const { return static_cast<int>(A.cols()); }
    int n1() const { return static_cast<int>(A.rows()); }
    int n2() const { return static_cast<int>(B.rows()); }
    int n3() const { return static_cast<int>(C.rows()); }

    /// Builds from per-term vectors; rejects length mismatches and zero
    /// component vectors, naming the offending term.
    static CpDecomposition from_vectors(const std::vector<VectorXd>& a,
                                        const std::vector<VectorXd>& b,
                                        const std::vector<VectorXd>& c);

    /// Throws InvalidInput if any stored component vector is zero.
    void validate() const;
};

/// T_ijk = sum_l A(i,l) B(j,l) C(k,l). The dims argument must match the
/// decomposition; mismatches name the offending mode.
Tensor3 assemble(const CpDecomposition& decomp, int n1, int n2, int n3);
Tensor3 assemble(const CpDecomposition& decomp);

/// Matrix obtained by fixing one mode at a 1-based index; the remaining modes
/// index rows/columns in increasing mode order.
MatrixXd slice(const Tensor3& t, int mode, int index);

/// The same tensor with modes 2 and 3 exchanged.
Tensor3 swap_modes_23(const Tensor3& t);

/// All component entries i.i.d. standard normal; deterministic per seed.
CpDecomposition random_generic_decomposition(int n1, int n2, int n3, int r,
                                             std::uint64_t seed);

/// Outcome of matching a computed decomposition against a reference one.
struct RecoveryReport {
    std::vector<int> matched_permutation;  // found term l -> truth term
    VectorXd per_term_relative_error;      // indexed by found term
    double max_relative_error = 0.0;
    double reconstruction_relative_error = 0.0;
    /// Greedy matching produced a pairing with some error > 0.5; term-level
    /// identification is not trustworthy (the errors are still reported).
    bool ambiguous = false;
};

/// Greedy best-first matching of found rank-1 terms to truth terms by
/// Frobenius distance between the unit-normalized rank-1 tensors. A term and
/// its negation are antipodal (distance 2): sign flips that change the rank-1
/// tensor are real discrepancies and are not normalized away.
RecoveryReport match_and_score(const CpDecomposition& truth,
                               const CpDecomposition& found);

} // namespace kyt
