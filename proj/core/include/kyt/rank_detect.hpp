#pragma once

#include "kyt/flattening.hpp"

#include <optional>

namespace kyt {

/// Outcome of flattening-based rank detection.
struct RankReport {
    Index flattening_rank = 0;
    std::uint64_t divisor = 1;               // binomial(q-1, p)
    std::optional<int> detected_rank;        // present iff divisible
    int certified_lower_bound = 0;           // ceil(flattening_rank / divisor)
    int p = 0;
    int q = 0;
    /// Largest rank the additivity guarantee covers at these dimensions:
    /// (n2+n3) * (1 - (1+alpha)/q) - q with alpha = max(n2/n3, n3/n2).
    double theorem_bound = 0.0;
    bool within_guarantee = false;           // detected_rank present and <= bound
};

/// Rank detection with p = balanced_p(q, n2, n3). When the flattening rank is
/// not a multiple of binomial(q-1,p), detection abstains (detected_rank is
/// empty) rather than rounding. q > n1 is an error; permute the tensor so the
/// smallest mode comes first.
RankReport detect_rank(const Tensor3& t, int q, const TolerancePolicy& tol);

/// ceil(rank(flattening) / binomial(q-1,p)): a lower bound on the CP rank of
/// an arbitrary tensor, generic or not.
int certify_rank_lower_bound(const Tensor3& t, int p, int q, const TolerancePolicy& tol);

/// Default detection parameter: the largest odd q <= min(n1, 7).
int default_q(int n1);

} // namespace kyt
