#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kyt/error.hpp"
#include "kyt/linalg.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace kyt;
using kyt::test::gaussian_matrix;
using kyt::test::gaussian_vector;

namespace {
const TolerancePolicy tol{};
}

TEST_CASE("tolerance validation") {
    CHECK_THROWS_AS((TolerancePolicy{0.0, 1e-6, 1e-8}.validate()), InvalidInput);
    CHECK_THROWS_AS((TolerancePolicy{1e-9, 1.5, 1e-8}.validate()), InvalidInput);
    CHECK_NOTHROW(TolerancePolicy{}.validate());
}

TEST_CASE("numerical_rank basics") {
    CHECK(numerical_rank(MatrixXd::Identity(3, 3), tol) == 3);
    CHECK(numerical_rank(MatrixXd::Zero(4, 5), tol) == 0);
    const VectorXd u = gaussian_vector(6, 1);
    const VectorXd v = gaussian_vector(4, 2);
    CHECK(numerical_rank(u * v.transpose(), tol) == 1);
    CHECK(numerical_rank(MatrixXd(0, 3), tol) == 0);
}

TEST_CASE("rank is transpose invariant") {
    for (int trial = 0; trial < 10; ++trial) {
        const int r = 1 + trial % 4;
        const MatrixXd a = gaussian_matrix(7, r, 100 + trial) *
                           gaussian_matrix(r, 5, 200 + trial);
        CHECK(numerical_rank(a, tol) == numerical_rank(a.transpose(), tol));
        CHECK(numerical_rank(a, tol) == r);
    }
}

TEST_CASE("column_space basics") {
    const SubspaceBasis full = column_space(MatrixXd::Identity(4, 4), tol);
    CHECK(full.dim() == 4);

    MatrixXd ones(2, 1);
    ones << 1, 1;
    const SubspaceBasis diag = column_space(ones, tol);
    CHECK(diag.dim() == 1);
    CHECK(std::abs(std::abs(diag.basis(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(diag.basis(0, 0) - diag.basis(1, 0)) < 1e-12);

    const MatrixXd a = gaussian_matrix(8, 3, 3) * gaussian_matrix(3, 6, 4);
    const SubspaceBasis cs = column_space(a, tol);
    CHECK(cs.dim() == numerical_rank(a, tol));
    CHECK((cs.basis.transpose() * cs.basis - MatrixXd::Identity(cs.dim(), cs.dim()))
              .norm() < 1e-12);
}

TEST_CASE("intersect coordinate examples") {
    MatrixXd u(3, 2), v(3, 2);
    u << 1, 0, 0, 1, 0, 0;  // span{e1, e2}
    v << 0, 0, 1, 0, 0, 1;  // span{e2, e3}
    const SubspaceBasis inter = intersect({3, u}, {3, v}, tol);
    REQUIRE(inter.dim() == 1);
    CHECK(std::abs(std::abs(inter.basis(1, 0)) - 1.0) < 1e-12);

    MatrixXd e1(2, 1), e2(2, 1);
    e1 << 1, 0;
    e2 << 0, 1;
    CHECK(intersect({2, e1}, {2, e2}, tol).dim() == 0);

    const SubspaceBasis w = column_space(gaussian_matrix(6, 3, 5), tol);
    const SubspaceBasis self = intersect(w, w, tol);
    CHECK(self.dim() == w.dim());
    // same span: projecting onto w leaves the intersection basis unchanged
    CHECK((w.basis * (w.basis.transpose() * self.basis) - self.basis).norm() < 1e-10);

    CHECK_THROWS_AS(intersect({3, u}, {2, e1}, tol), InvalidInput);
}

TEST_CASE("intersection dimension lower bound on random subspaces") {
    for (int trial = 0; trial < 8; ++trial) {
        const int ambient = 8;
        const int du = 3 + trial % 4, dv = 4 + trial % 3;
        const SubspaceBasis u = column_space(gaussian_matrix(ambient, du, 50 + trial), tol);
        const SubspaceBasis v = column_space(gaussian_matrix(ambient, dv, 80 + trial), tol);
        const Index lower = std::max<Index>(0, u.dim() + v.dim() - ambient);
        CHECK(intersect(u, v, tol).dim() >= lower);
    }
}

TEST_CASE("solve_linear examples") {
    {
        const VectorXd b = gaussian_vector(4, 9);
        const LinearSolveResult s = solve_linear(MatrixXd::Identity(4, 4), b, tol);
        CHECK((s.solution - b).norm() < 1e-12);
        CHECK(s.residual < 1e-14);
        CHECK(s.is_unique);
    }
    {
        MatrixXd a(2, 1);
        a << 1, 1;
        VectorXd b(2);
        b << 1, 1;
        const LinearSolveResult s = solve_linear(a, b, tol);
        CHECK(std::abs(s.solution(0) - 1.0) < 1e-12);
        CHECK(s.residual < 1e-14);
        CHECK(s.is_unique);
    }
    {
        MatrixXd a(1, 2);
        a << 1, 1;
        VectorXd b(1);
        b << 2;
        const LinearSolveResult s = solve_linear(a, b, tol);
        CHECK(std::abs(s.solution(0) - 1.0) < 1e-12);
        CHECK(std::abs(s.solution(1) - 1.0) < 1e-12);
        CHECK_FALSE(s.is_unique);
    }
}

TEST_CASE("solve residual property for consistent systems") {
    for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd a = gaussian_matrix(9, 5, 300 + trial);
        const VectorXd x = gaussian_vector(5, 400 + trial);
        const LinearSolveResult s = solve_linear(a, a * x, tol);
        CHECK(s.residual < 1e-10);
        CHECK(s.is_unique);
        CHECK((s.solution - x).norm() < 1e-8 * x.norm());
    }
}

namespace {

// Slice stack of R = sum_l e_l (x) p_l with p_l = sum_m beta(l,m) z_m z_m'.
std::vector<MatrixXd> mixed_symmetric_slices(const MatrixXd& z, const MatrixXd& beta) {
    std::vector<MatrixXd> slices;
    for (Index l = 0; l < beta.rows(); ++l) {
        MatrixXd p = MatrixXd::Zero(z.rows(), z.rows());
        for (Index m = 0; m < beta.cols(); ++m) {
            p += beta(l, m) * z.col(m) * z.col(m).transpose();
        }
        slices.push_back(p);
    }
    return slices;
}

} // namespace

TEST_CASE("simultaneous_diagonalize single slice") {
    VectorXd z(2);
    z << 1, 2;
    const std::vector<MatrixXd> slices{z * z.transpose()};
    const auto w = simultaneous_diagonalize(slices, tol);
    REQUIRE(w.size() == 1);
    CHECK((w[0] * w[0].transpose() - z * z.transpose() / z.squaredNorm()).norm() < 1e-10);
}

TEST_CASE("simultaneous_diagonalize unit basis pair") {
    MatrixXd z = MatrixXd::Identity(2, 2);
    MatrixXd beta(2, 2);
    beta << 1, 2, 3, 4;  // invertible mixing
    const auto w = simultaneous_diagonalize(mixed_symmetric_slices(z, beta), tol);
    REQUIRE(w.size() == 2);
    std::vector<MatrixXd> expected{z.col(0) * z.col(0).transpose(),
                                   z.col(1) * z.col(1).transpose()};
    std::vector<MatrixXd> got;
    for (const auto& v : w) got.push_back(v * v.transpose());
    CHECK(kyt::test::match_rank1_sets(expected, got) < 1e-8);
}

TEST_CASE("simultaneous_diagonalize recovers random generators") {
    // planted construction is the oracle
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 5, r = 3;
        const MatrixXd z = gaussian_matrix(n, r, 500 + trial);
        MatrixXd beta = gaussian_matrix(r, r, 600 + trial);
        const auto w = simultaneous_diagonalize(mixed_symmetric_slices(z, beta), tol);
        REQUIRE(w.size() == r);
        std::vector<MatrixXd> expected, got;
        for (int m = 0; m < r; ++m) {
            expected.push_back(z.col(m) * z.col(m).transpose());
        }
        for (const auto& v : w) got.push_back(v * v.transpose());
        CHECK(kyt::test::match_rank1_sets(expected, got) < 1e-8);
    }
}

TEST_CASE("simultaneous_diagonalize rejects bad input") {
    CHECK_THROWS_AS(simultaneous_diagonalize({}, tol), InvalidInput);
    // Non-symmetric-lift slices with genuinely complex joint eigenstructure.
    MatrixXd rot(2, 2), id = MatrixXd::Identity(2, 2);
    rot << 0, -1, 1, 0;
    CHECK_THROWS_AS(simultaneous_diagonalize({id, rot}, tol), AlgorithmFail);
}

TEST_CASE("linearly dependent slices are reported unstable") {
    // two proportional slices cannot separate two eigenvalues
    const VectorXd z1 = gaussian_vector(4, 901), z2 = gaussian_vector(4, 902);
    const MatrixXd p = z1 * z1.transpose() + z2 * z2.transpose();
    CHECK_THROWS_WITH_AS(simultaneous_diagonalize({p, 2.0 * p}, tol),
                         doctest::Contains("unstable"), AlgorithmFail);
}

TEST_CASE("normalization helpers") {
    VectorXd v(3);
    v << 1, -4, 2;
    const VectorXd n1 = unit_with_maxmag_sign(v);
    CHECK(n1(1) > 0.0);
    CHECK(std::abs(n1.norm() - 1.0) < 1e-14);
    const VectorXd n2 = unit_with_leading_sign(v);
    CHECK(n2(0) > 0.0);
    VectorXd tiny_lead(2);
    tiny_lead << 1e-16, -1.0;
    CHECK(unit_with_leading_sign(tiny_lead)(1) > 0.0);
    const VectorXd zero = VectorXd::Zero(3);
    CHECK_THROWS_AS(unit_with_maxmag_sign(zero), InvalidInput);
}
