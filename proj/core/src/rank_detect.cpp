#include "kyt/rank_detect.hpp"

#include "kyt/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kyt {

RankReport detect_rank(const Tensor3& t, int q, const TolerancePolicy& tol) {
    if (q < 1) throw InvalidInput("detect_rank: q must be >= 1");
    if (q > t.n1()) {
        throw InvalidInput("detect_rank: q=" + std::to_string(q) + " exceeds n1=" +
                           std::to_string(t.n1()) +
                           "; permute the modes so the smallest one comes first");
    }
    RankReport report;
    report.q = q;
    report.p = balanced_p(q, t.n2(), t.n3());
    report.divisor = binomial(q - 1, report.p);

    const FlatteningMatrix m = koszul_flattening(t, report.p, q);
    report.flattening_rank = numerical_rank(m.matrix, tol);

    const auto d = static_cast<Index>(report.divisor);
    if (report.flattening_rank % d == 0) {
        report.detected_rank = static_cast<int>(report.flattening_rank / d);
    }
    report.certified_lower_bound = static_cast<int>((report.flattening_rank + d - 1) / d);

    const double n2 = t.n2(), n3 = t.n3();
    const double alpha = std::max(n2 / n3, n3 / n2);
    report.theorem_bound = (n2 + n3) * (1.0 - (1.0 + alpha) / q) - q;
    report.within_guarantee = report.detected_rank.has_value() &&
                              *report.detected_rank <= report.theorem_bound;
    return report;
}

int certify_rank_lower_bound(const Tensor3& t, int p, int q, const TolerancePolicy& tol) {
    const FlatteningMatrix m = koszul_flattening(t, p, q);
    const auto divisor = static_cast<Index>(binomial(q - 1, p));
    const Index rank = numerical_rank(m.matrix, tol);
    return static_cast<int>((rank + divisor - 1) / divisor);
}

int default_q(int n1) {
    if (n1 < 1) throw InvalidInput("default_q: n1 must be >= 1");
    const int cap = std::min(n1, 7);
    return cap % 2 == 1 ? cap : cap - 1;
}

} // namespace kyt
