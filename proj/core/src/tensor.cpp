#include "kyt/tensor.hpp"

#include "kyt/error.hpp"
#include "kyt/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kyt {

Tensor3::Tensor3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3) {
    if (n1 < 1 || n2 < 1 || n3 < 1) {
        throw InvalidInput("Tensor3: dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(n1) * n2 * n3, 0.0);
}

Tensor3 Tensor3::from_data(int n1, int n2, int n3, std::vector<double> data) {
    Tensor3 t(n1, n2, n3);
    if (data.size() != t.data_.size()) {
        throw InvalidInput("Tensor3: expected " + std::to_string(t.data_.size()) +
                           " entries, got " + std::to_string(data.size()));
    }
    for (double v : data) {
        if (!std::isfinite(v)) throw InvalidInput("Tensor3: entries must be finite");
    }
    t.data_ = std::move(data);
    return t;
}

std::size_t Tensor3::offset(int i, int j, int k) const {
    if (i < 1 || i > n1_ || j < 1 || j > n2_ || k < 1 || k > n3_) {
        throw InvalidInput("Tensor3: index (" + std::to_string(i) + "," +
                           std::to_string(j) + "," + std::to_string(k) +
                           ") out of range for dims (" + std::to_string(n1_) + "," +
                           std::to_string(n2_) + "," + std::to_string(n3_) + ")");
    }
    return (static_cast<std::size_t>(i - 1) * n2_ + (j - 1)) * n3_ + (k - 1);
}

double Tensor3::frobenius_norm() const {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return std::sqrt(sum);
}

CpDecomposition CpDecomposition::from_vectors(const std::vector<VectorXd>& a,
                                              const std::vector<VectorXd>& b,
                                              const std::vector<VectorXd>& c) {
    if (a.size() != b.size() || a.size() != c.size()) {
        throw InvalidInput("CpDecomposition: component lists have different lengths");
    }
    const int r = static_cast<int>(a.size());
    CpDecomposition d;
    if (r == 0) {
        d.A = MatrixXd(0, 0);
        d.B = MatrixXd(0, 0);
        d.C = MatrixXd(0, 0);
        return d;
    }
    d.A = MatrixXd(a[0].size(), r);
    d.B = MatrixXd(b[0].size(), r);
    d.C = MatrixXd(c[0].size(), r);
    for (int l = 0; l < r; ++l) {
        if (a[l].size() != d.A.rows() || b[l].size() != d.B.rows() ||
            c[l].size() != d.C.rows()) {
            throw InvalidInput("CpDecomposition: component " + std::to_string(l + 1) +
                               " has inconsistent vector lengths");
        }
        d.A.col(l) = a[l];
        d.B.col(l) = b[l];
        d.C.col(l) = c[l];
    }
    d.validate();
    return d;
}

void CpDecomposition::validate() const {
    if (B.cols() != A.cols() || C.cols() != A.cols()) {
        throw InvalidInput("CpDecomposition: factor matrices disagree on rank");
    }
    for (int l = 0; l < rank(); ++l) {
        const char* mode = nullptr;
        if (A.col(l).norm() == 0.0) mode = "a";
        else if (B.col(l).norm() == 0.0) mode = "b";
        else if (C.col(l).norm() == 0.0) mode = "c";
        if (mode != nullptr) {
            throw InvalidInput("CpDecomposition: component " + std::to_string(l + 1) +
                               " has a zero " + mode + "-vector (degenerate term)");
        }
    }
}

Tensor3 assemble(const CpDecomposition& decomp, int n1, int n2, int n3) {
    if (decomp.rank() > 0) {
        if (decomp.n1() != n1)
            throw InvalidInput("assemble: mode-1 length " + std::to_string(decomp.n1()) +
                               " does not match n1=" + std::to_string(n1));
        if (decomp.n2() != n2)
            throw InvalidInput("assemble: mode-2 length " + std::to_string(decomp.n2()) +
                               " does not match n2=" + std::to_string(n2));
        if (decomp.n3() != n3)
            throw InvalidInput("assemble: mode-3 length " + std::to_string(decomp.n3()) +
                               " does not match n3=" + std::to_string(n3));
    }
    Tensor3 t(n1, n2, n3);
    for (int l = 0; l < decomp.rank(); ++l) {
        for (int i = 1; i <= n1; ++i) {
            const double ai = decomp.A(i - 1, l);
            if (ai == 0.0) continue;
            for (int j = 1; j <= n2; ++j) {
                const double aibj = ai * decomp.B(j - 1, l);
                for (int k = 1; k <= n3; ++k) {
                    t.at(i, j, k) += aibj * decomp.C(k - 1, l);
                }
            }
        }
    }
    return t;
}

Tensor3 assemble(const CpDecomposition& decomp) {
    if (decomp.rank() == 0) {
        throw InvalidInput("assemble: dims cannot be inferred from an empty decomposition");
    }
    return assemble(decomp, decomp.n1(), decomp.n2(), decomp.n3());
}

MatrixXd slice(const Tensor3& t, int mode, int index) {
    const auto [n1, n2, n3] = t.dims();
    switch (mode) {
        case 1: {
            if (index < 1 || index > n1) throw InvalidInput("slice: index out of range");
            MatrixXd m(n2, n3);
            for (int j = 1; j <= n2; ++j)
                for (int k = 1; k <= n3; ++k) m(j - 1, k - 1) = t(index, j, k);
            return m;
        }
        case 2: {
            if (index < 1 || index > n2) throw InvalidInput("slice: index out of range");
            MatrixXd m(n1, n3);
            for (int i = 1; i <= n1; ++i)
                for (int k = 1; k <= n3; ++k) m(i - 1, k - 1) = t(i, index, k);
            return m;
        }
        case 3: {
            if (index < 1 || index > n3) throw InvalidInput("slice: index out of range");
            MatrixXd m(n1, n2);
            for (int i = 1; i <= n1; ++i)
                for (int j = 1; j <= n2; ++j) m(i - 1, j - 1) = t(i, j, index);
            return m;
        }
        default:
            throw InvalidInput("slice: mode must be 1, 2 or 3");
    }
}

Tensor3 swap_modes_23(const Tensor3& t) {
    Tensor3 out(t.n1(), t.n3(), t.n2());
    for (int i = 1; i <= t.n1(); ++i)
        for (int j = 1; j <= t.n2(); ++j)
            for (int k = 1; k <= t.n3(); ++k) out.at(i, k, j) = t(i, j, k);
    return out;
}

CpDecomposition random_generic_decomposition(int n1, int n2, int n3, int r,
                                             std::uint64_t seed) {
    if (r < 1) throw InvalidInput("random_generic_decomposition: r must be >= 1");
    if (n1 < 1 || n2 < 1 || n3 < 1) {
        throw InvalidInput("random_generic_decomposition: dims must be positive");
    }
    GaussianSampler gauss(seed);
    CpDecomposition d;
    d.A = MatrixXd(n1, r);
    d.B = MatrixXd(n2, r);
    d.C = MatrixXd(n3, r);
    for (int l = 0; l < r; ++l) {
        for (int i = 0; i < n1; ++i) d.A(i, l) = gauss();
        for (int j = 0; j < n2; ++j) d.B(j, l) = gauss();
        for (int k = 0; k < n3; ++k) d.C(k, l) = gauss();
    }
    return d;
}

namespace {

struct NormalizedTerm {
    VectorXd a, b, c;   // unit norm, signs untouched
};

NormalizedTerm normalized_term(const CpDecomposition& d, int l) {
    NormalizedTerm t;
    t.a = d.A.col(l) / d.A.col(l).norm();
    t.b = d.B.col(l) / d.B.col(l).norm();
    t.c = d.C.col(l) / d.C.col(l).norm();
    return t;
}

// Frobenius distance between the two unit-norm rank-1 tensors, summed
// entrywise; the closed form sqrt(2 - 2 cos) cancels catastrophically near 0.
double term_distance(const NormalizedTerm& x, const NormalizedTerm& y) {
    double sum = 0.0;
    for (Index i = 0; i < x.a.size(); ++i) {
        for (Index j = 0; j < x.b.size(); ++j) {
            const double xab = x.a(i) * x.b(j);
            const double yab = y.a(i) * y.b(j);
            for (Index k = 0; k < x.c.size(); ++k) {
                const double d = xab * x.c(k) - yab * y.c(k);
                sum += d * d;
            }
        }
    }
    return std::sqrt(sum);
}

} // namespace

RecoveryReport match_and_score(const CpDecomposition& truth,
                               const CpDecomposition& found) {
    if (truth.rank() != found.rank()) {
        throw InvalidInput("match_and_score: ranks differ (" +
                           std::to_string(truth.rank()) + " vs " +
                           std::to_string(found.rank()) + ")");
    }
    if (truth.rank() > 0 &&
        (truth.n1() != found.n1() || truth.n2() != found.n2() ||
         truth.n3() != found.n3())) {
        throw InvalidInput("match_and_score: dimensions differ");
    }
    truth.validate();
    found.validate();

    const int r = truth.rank();
    RecoveryReport report;
    report.matched_permutation.assign(r, 0);
    report.per_term_relative_error = VectorXd::Zero(r);
    if (r == 0) return report;

    std::vector<NormalizedTerm> truth_terms, found_terms;
    for (int l = 0; l < r; ++l) {
        truth_terms.push_back(normalized_term(truth, l));
        found_terms.push_back(normalized_term(found, l));
    }

    struct Pair {
        double dist;
        int found_idx, truth_idx;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(r) * r);
    for (int f = 0; f < r; ++f)
        for (int t = 0; t < r; ++t)
            pairs.push_back({term_distance(found_terms[f], truth_terms[t]), f, t});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.dist != y.dist) return x.dist < y.dist;
        if (x.found_idx != y.found_idx) return x.found_idx < y.found_idx;
        return x.truth_idx < y.truth_idx;
    });

    std::vector<bool> found_used(r, false), truth_used(r, false);
    int matched = 0;
    for (const Pair& p : pairs) {
        if (matched == r) break;
        if (found_used[p.found_idx] || truth_used[p.truth_idx]) continue;
        found_used[p.found_idx] = true;
        truth_used[p.truth_idx] = true;
        report.matched_permutation[p.found_idx] = p.truth_idx;
        report.per_term_relative_error(p.found_idx) = p.dist;
        ++matched;
    }

    report.max_relative_error = report.per_term_relative_error.maxCoeff();
    report.ambiguous = report.max_relative_error > 0.5;

    const Tensor3 t_truth = assemble(truth);
    const Tensor3 t_found = assemble(found);
    double diff = 0.0;
    for (std::size_t i = 0; i < t_truth.data().size(); ++i) {
        const double d = t_found.data()[i] - t_truth.data()[i];
        diff += d * d;
    }
    const double denom = t_truth.frobenius_norm();
    report.reconstruction_relative_error =
        denom > 0.0 ? std::sqrt(diff) / denom : std::sqrt(diff);
    return report;
}

} // namespace kyt
