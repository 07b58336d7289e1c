#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kyt/commuting.hpp"
#include "kyt/error.hpp"
#include "rank1_partition_fixture.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace kyt;

namespace {
const TolerancePolicy tol{};
}

TEST_CASE("generated instances commute and are deterministic") {
    const CommExtInstance inst = generate_planted_instance(2, 2, 3, 5);
    REQUIRE(inst.planted.size() == 2);
    CHECK((inst.planted[0] * inst.planted[1] - inst.planted[1] * inst.planted[0]).norm() <
          1e-10);

    const CommExtInstance again = generate_planted_instance(2, 2, 3, 5);
    for (int i = 0; i < 2; ++i) {
        CHECK((inst.planted[i] - again.planted[i]).norm() == 0.0);
    }

    const CommExtInstance square = generate_planted_instance(3, 4, 4, 6);
    for (int i = 0; i < 3; ++i) {
        CHECK((square.visible[i] - square.planted[i]).norm() == 0.0);
    }

    CHECK_THROWS_AS(generate_planted_instance(2, 5, 4, 1), InvalidInput);
}

TEST_CASE("extend_to_inverse_pair: square case returns inputs") {
    const MatrixXd r = kyt::test::gaussian_matrix(4, 4, 71);
    const MatrixXd r_inv = r.inverse();
    const auto [u, v] = extend_to_inverse_pair(r_inv, r, tol);
    CHECK((u - r_inv).norm() == 0.0);
    CHECK((v - r).norm() == 0.0);
}

TEST_CASE("extend_to_inverse_pair: forced kernel case") {
    MatrixXd u(1, 2), v(2, 1);
    u << 1, 0;
    v << 1, 0;
    const auto [uf, vf] = extend_to_inverse_pair(u, v, tol);
    CHECK((uf * vf - MatrixXd::Identity(2, 2)).norm() < 1e-12);
    CHECK(std::abs(std::abs(vf(1, 1)) - 1.0) < 1e-12);  // second column is +-e2
    CHECK(std::abs(vf(0, 1)) < 1e-12);
}

TEST_CASE("extend_to_inverse_pair on random blocks of an inverse pair") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const int n = 3, r = 5;
        const MatrixXd whole = kyt::test::gaussian_matrix(r, r, 700 + seed);
        const MatrixXd inverse = whole.inverse();
        const MatrixXd u = inverse.topRows(n);
        const MatrixXd v = whole.leftCols(n);
        const auto [uf, vf] = extend_to_inverse_pair(u, v, tol);
        CHECK((uf * vf - MatrixXd::Identity(r, r)).norm() < 1e-9);
        CHECK((uf.topRows(n) - u).norm() == 0.0);
        CHECK((vf.leftCols(n) - v).norm() == 0.0);
    }
}

TEST_CASE("extend_to_inverse_pair rejects non-inverse inputs") {
    const MatrixXd u = kyt::test::gaussian_matrix(2, 4, 72);
    const MatrixXd v = kyt::test::gaussian_matrix(4, 2, 73);
    CHECK_THROWS_AS(extend_to_inverse_pair(u, v, tol), InvalidInput);
}

TEST_CASE("solve and verify a planted instance") {
    const CommExtInstance inst = generate_planted_instance(5, 8, 9, 74);
    const CommExtSolution sol = solve_commuting_extension(inst.visible, 9, 74, tol);
    REQUIRE(sol.extensions.size() == 5);
    const ExtensionReport report = verify_extension(inst.visible, sol.extensions, 1e-7);
    CHECK(report.pass);
    CHECK(report.commutator_residual <= 1e-7);
    CHECK(report.extension_residual <= 1e-7);
}

TEST_CASE("solve an overcomplete planted instance (r > n)") {
    const CommExtInstance inst = generate_planted_instance(5, 12, 14, 75);
    const CommExtSolution sol = solve_commuting_extension(inst.visible, 14, 75, tol);
    const ExtensionReport report = verify_extension(inst.visible, sol.extensions, 1e-7);
    CHECK(report.pass);
}

TEST_CASE("verifier accepts ground truth and rejects perturbations") {
    const CommExtInstance inst = generate_planted_instance(4, 5, 7, 76);
    const ExtensionReport good = verify_extension(inst.visible, inst.planted, 1e-12);
    CHECK(good.pass);
    CHECK(good.commutator_residual < 1e-12);
    CHECK(good.extension_residual < 1e-12);

    auto corrupted = inst.planted;
    corrupted[1](6, 6) += 1.0;
    CHECK_FALSE(verify_extension(inst.visible, corrupted, 1e-7).pass);
}

TEST_CASE("block doubling extension: exact zero commutator on integer blocks") {
    // Integer entries keep every product exact in double precision, so the
    // commutators vanish identically, not just to rounding.
    std::vector<MatrixXd> visible;
    std::mt19937 rng(9);
    for (int i = 0; i < 4; ++i) {
        MatrixXd a(5, 5);
        for (int row = 0; row < 5; ++row)
            for (int col = 0; col < 5; ++col)
                a(row, col) = static_cast<double>(static_cast<int>(rng() % 11)) - 5.0;
        visible.push_back(a);
    }
    const std::vector<MatrixXd> doubled = block_doubling_extension(visible);
    const ExtensionReport report = verify_extension(visible, doubled, 1e-7);
    CHECK(report.pass);
    CHECK(report.commutator_residual == 0.0);
    CHECK(report.extension_residual == 0.0);

    // Gaussian blocks are accepted at tolerance as well.
    std::vector<MatrixXd> real_visible;
    for (int i = 0; i < 3; ++i) {
        real_visible.push_back(kyt::test::gaussian_matrix(4, 4, 800 + i));
    }
    const ExtensionReport real_report =
        verify_extension(real_visible, block_doubling_extension(real_visible), 1e-7);
    CHECK(real_report.pass);
}

TEST_CASE("rank-1 identity partitions drive a unique diagonal solve") {
    for (const auto [n, r] : std::vector<std::pair<int, int>>{
             {3, 3}, {3, 5}, {3, 7}, {4, 6}, {4, 13}, {5, 9}}) {
        const auto factors = kyt::test::rank1_partition_of_identity(n, r);
        REQUIRE(static_cast<int>(factors.size()) == r);

        MatrixXd sum = MatrixXd::Zero(n, n);
        MatrixXd vectorized(n * n, r);
        for (int l = 0; l < r; ++l) {
            const MatrixXd outer = factors[l].first * factors[l].second.transpose();
            sum += outer;
            vectorized.col(l) = outer.reshaped();
        }
        CHECK((sum - MatrixXd::Identity(n, n)).norm() == 0.0);
        CHECK(numerical_rank(vectorized, tol) == r);

        // the diagonal system B D C = I built from these factors is unique
        const LinearSolveResult solve = solve_linear(
            vectorized, MatrixXd::Identity(n, n).reshaped(), tol);
        CHECK(solve.is_unique);
        CHECK(solve.residual < 1e-12);
        CHECK((solve.solution - VectorXd::Ones(r)).norm() < 1e-10);
    }
}

TEST_CASE("solver input validation") {
    const CommExtInstance inst = generate_planted_instance(2, 3, 4, 77);
    CHECK_THROWS_AS(solve_commuting_extension(inst.visible, 4, 1, tol), InvalidInput);
    CHECK_THROWS_AS(verify_extension(inst.visible, {}, 1e-7), InvalidInput);
}
