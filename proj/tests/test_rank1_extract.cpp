#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kyt/error.hpp"
#include "kyt/rank1_extract.hpp"
#include "test_helpers.hpp"

#include <vector>

using namespace kyt;
using kyt::test::gaussian_vector;
using kyt::test::match_rank1_sets;

namespace {

const TolerancePolicy tol{};

// Planted generators plus a basis of their span obtained by random mixing,
// so the input hides the rank-1 structure.
struct PlantedSpace {
    std::vector<MatrixXd> generators;
    MatrixSubspace space;
};

PlantedSpace planted(int m, int n, int r, std::uint64_t seed) {
    PlantedSpace out;
    MatrixXd mixing = kyt::test::gaussian_matrix(r, r, mix_seed(seed, 77));
    std::vector<MatrixXd> mixed(r, MatrixXd::Zero(m, n));
    for (int l = 0; l < r; ++l) {
        const VectorXd d = gaussian_vector(m, mix_seed(seed, 2 * l));
        const VectorXd b = gaussian_vector(n, mix_seed(seed, 2 * l + 1));
        out.generators.push_back(d * b.transpose());
        for (int t = 0; t < r; ++t) mixed[t] += mixing(t, l) * out.generators[l];
    }
    out.space = MatrixSubspace::validated(std::move(mixed), tol);
    return out;
}

} // namespace

TEST_CASE("single rank-1 generator is returned normalized") {
    const VectorXd d = gaussian_vector(3, 1);
    const VectorXd b = gaussian_vector(5, 2);
    const MatrixXd gen = d * b.transpose();
    const auto out =
        find_rank1_elements(MatrixSubspace::validated({gen}, tol), 1, tol);
    REQUIRE(out.size() == 1);
    CHECK((out[0] - unit_with_maxmag_sign(gen)).norm() < 1e-10);
}

TEST_CASE("two coordinate generators in 2x2") {
    MatrixXd e11 = MatrixXd::Zero(2, 2), e22 = MatrixXd::Zero(2, 2);
    e11(0, 0) = 1.0;
    e22(1, 1) = 1.0;
    const auto out =
        find_rank1_elements(MatrixSubspace::validated({e11 + e22, e11 - e22}, tol), 2, tol);
    REQUIRE(out.size() == 2);
    CHECK(match_rank1_sets({e11, e22}, out) < 1e-10);
}

TEST_CASE("recovers three random generators in 3x8") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const PlantedSpace p = planted(3, 8, 3, 700 + seed);
        const auto out = find_rank1_elements(p.space, 3, tol);
        CHECK(match_rank1_sets(p.generators, out) < 1e-8);
    }
}

TEST_CASE("outputs are rank 1 and pairwise independent") {
    const PlantedSpace p = planted(4, 6, 5, 88);
    const auto out = find_rank1_elements(p.space, 5, tol);
    for (const MatrixXd& x : out) {
        CHECK(kyt::test::svd_rank_oracle(x) == 1);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            MatrixXd stacked(out[i].size(), 2);
            stacked.col(0) = out[i].reshaped();
            stacked.col(1) = out[j].reshaped();
            CHECK(numerical_rank(stacked, tol) == 2);
        }
    }
}

TEST_CASE("idempotence: extracting from the span of outputs returns them") {
    const PlantedSpace p = planted(3, 7, 4, 99);
    const auto first = find_rank1_elements(p.space, 4, tol);
    const auto second =
        find_rank1_elements(MatrixSubspace::validated(first, tol), 4, tol);
    CHECK(match_rank1_sets(first, second) < 1e-9);
}

TEST_CASE("spurious input fails with the intersection dimension") {
    // span{I, skew} in 3x3 contains no rank-1 elements, and with nine minor
    // constraints the lifted intersection collapses below r.
    MatrixXd id = MatrixXd::Identity(3, 3), skew = MatrixXd::Zero(3, 3);
    skew(0, 1) = -1.0;
    skew(1, 0) = 1.0;
    CHECK_THROWS_WITH_AS(
        find_rank1_elements(MatrixSubspace::validated({id, skew}, tol), 2, tol),
        doctest::Contains("spurious intersection"), AlgorithmFail);
}

TEST_CASE("a plane with complex rank-1 structure fails at diagonalization") {
    MatrixXd id = MatrixXd::Identity(2, 2), rot(2, 2);
    rot << 0, -1, 1, 0;
    CHECK_THROWS_WITH_AS(
        find_rank1_elements(MatrixSubspace::validated({id, rot}, tol), 2, tol),
        doctest::Contains("not simultaneously diagonalizable"), AlgorithmFail);
}

TEST_CASE("input validation") {
    const PlantedSpace p = planted(3, 5, 2, 111);
    CHECK_THROWS_AS(find_rank1_elements(p.space, 3, tol), InvalidInput);
    std::vector<MatrixXd> dependent{p.generators[0], 2.0 * p.generators[0]};
    CHECK_THROWS_AS(MatrixSubspace::validated(dependent, tol), InvalidInput);
}
