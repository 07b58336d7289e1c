#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kyt/combinat.hpp"
#include "kyt/error.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace kyt;

TEST_CASE("binomial values") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(7, 3) == 35);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(64, 32) == 1832624140942590534ULL);
    CHECK_THROWS_AS(binomial(65, 1), InvalidInput);
}

TEST_CASE("koszul_sign basic values") {
    const std::vector<int> s12{1, 2};
    CHECK(koszul_sign(s12, 1) == 1);
    CHECK(koszul_sign(s12, 2) == -1);
    const std::vector<int> s134{1, 3, 4};
    CHECK(koszul_sign(s134, 4) == 1);
    CHECK_THROWS_AS(koszul_sign(s134, 2), InvalidInput);
}

TEST_CASE("rank examples") {
    SubsetIndexer one(3, 1);
    CHECK(one.rank(std::vector<int>{1}) == 0);
    CHECK(one.rank(std::vector<int>{2}) == 1);
    CHECK(one.rank(std::vector<int>{3}) == 2);

    SubsetIndexer two(3, 2);
    CHECK(two.rank(std::vector<int>{1, 2}) == 0);
    CHECK(two.rank(std::vector<int>{1, 3}) == 1);
    CHECK(two.rank(std::vector<int>{2, 3}) == 2);

    SubsetIndexer five(5, 2);
    CHECK(five.count() == 10);
    CHECK(five.unrank(9) == std::vector<int>{4, 5});
}

TEST_CASE("rank endpoints and errors") {
    SubsetIndexer idx(7, 3);
    CHECK(idx.rank(std::vector<int>{1, 2, 3}) == 0);
    CHECK(idx.rank(std::vector<int>{5, 6, 7}) == idx.count() - 1);
    CHECK_THROWS_AS(idx.rank(std::vector<int>{1, 2}), InvalidInput);
    CHECK_THROWS_AS(idx.rank(std::vector<int>{3, 2, 1}), InvalidInput);
    CHECK_THROWS_AS(idx.rank(std::vector<int>{1, 2, 9}), InvalidInput);
    CHECK_THROWS_AS(idx.unrank(idx.count()), InvalidInput);
}

TEST_CASE("enumerate is the full lexicographic range and roundtrips") {
    for (int q = 0; q <= 8; ++q) {
        for (int p = 0; p <= q; ++p) {
            SubsetIndexer idx(q, p);
            const auto all = idx.enumerate();
            CHECK(all.size() == binomial(q, p));
            std::set<std::vector<int>> distinct(all.begin(), all.end());
            CHECK(distinct.size() == all.size());
            CHECK(std::is_sorted(all.begin(), all.end()));
            for (std::uint64_t i = 0; i < idx.count(); ++i) {
                CHECK(idx.rank(all[i]) == i);
            }
        }
    }
}

TEST_CASE("p = 0 edge") {
    SubsetIndexer idx(4, 0);
    CHECK(idx.count() == 1);
    CHECK(idx.unrank(0).empty());
    CHECK(idx.rank(std::vector<int>{}) == 0);
}

// For any set Y and distinct j,k in Y:
// sign(Y,j) * sign(Y\{j},k) = -sign(Y,k) * sign(Y\{k},j).
TEST_CASE("sign cancellation identity") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int size = 2 + static_cast<int>(rng() % 7);  // |Y| up to 8
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < size) {
            chosen.insert(1 + static_cast<int>(rng() % 12));
        }
        const std::vector<int> y(chosen.begin(), chosen.end());
        const int j = y[rng() % y.size()];
        int k = j;
        while (k == j) k = y[rng() % y.size()];

        auto without = [&y](int drop) {
            std::vector<int> out;
            for (int v : y)
                if (v != drop) out.push_back(v);
            return out;
        };
        const int lhs = koszul_sign(y, j) * koszul_sign(without(j), k);
        const int rhs = koszul_sign(y, k) * koszul_sign(without(k), j);
        CHECK(lhs == -rhs);
    }
}
