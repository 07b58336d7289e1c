#pragma once

#include "kyt/flattening.hpp"
#include "kyt/tensor.hpp"

#include <array>
#include <string>

namespace kyt {

/// One of the eleven uniqueness conditions, with its numerical evidence.
/// For full-rank conditions, measured is the margin (smallest needed singular
/// value over the rank threshold) and required is 1; for the two flattening
/// rank conditions, measured is the computed rank and required the target.
struct ConditionRecord {
    std::string label;   // "i" .. "xi"
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double required = 0.0;
    std::string note;    // e.g. "vacuous (no columns)"
};

/// Asymptotic regime in which the certificate is guaranteed to pass for
/// generic components: q >= (4+5a)(1+1/a) and
/// r <= (n2+n3)(1-(3+a)/q) - q^3/4, with a = max(n2/n3, n3/n2).
struct GuaranteeRegime {
    double alpha = 0.0;
    double q_required = 0.0;
    double r_bound = 0.0;
    bool within = false;
};

struct UniquenessCertificate {
    std::array<ConditionRecord, 11> conditions;
    bool overall = false;
    int p = 0, q = 0, prefix_overlap = 0, r = 0;
    GuaranteeRegime regime;
};

/// Certifies that the intersection of the flattening column space with the
/// pattern subspace contains nothing beyond the planted elements. Rows are
/// (S, j) with S a p-subset of {1..q} not contained in {1..p+1} and j in
/// [n2]; columns are (U, l) with U a (p+1)-subset containing 1, U != {1..p+1},
/// l in [r]; the entry is b_l(j) * sign(U,i) * a_l(i) when U = S + {i}.
/// Swapped mode uses subset sizes (q-p-1, q-p), the c-vectors and n3.
MatrixXd intersection_certificate_matrix(const CpDecomposition& decomp, int p, int q,
                                         FlatteningMode mode);

/// Certifies that the lifted prefix-by-mode-vector elements admit no spurious
/// minor-vanishing combinations. Rows are (i1<i2 <= prefix, j1<j2 <= n),
/// columns are term pairs (l1<l2); full column rank rules out spurious
/// elements. Standard mode uses prefix p+1 with the b-vectors; swapped uses
/// q-p with the c-vectors.
MatrixXd lift_certificate_matrix(const CpDecomposition& decomp, int p, int q,
                                 FlatteningMode mode);

/// Evaluates all eleven conditions numerically; failures are recorded, never
/// thrown. Requires min(p+1, q-p) >= 2.
UniquenessCertificate certify_uniqueness(const CpDecomposition& decomp, int p, int q,
                                         const TolerancePolicy& tol);

} // namespace kyt
