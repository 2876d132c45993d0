#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "swards/metrics.hpp"
#include "swards/rng.hpp"
#include "oracles.hpp"

using namespace swards;
using Catch::Approx;

TEST_CASE("rand_index hand values") {
    CHECK(rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == 1.0); // relabeled but identical
    CHECK(rand_index({0, 0, 1}, {0, 1, 1}) == Approx(1.0 / 3.0));
    CHECK(rand_index({0, 1, 2}, {0, 0, 0}) == 0.0);
    CHECK(rand_index({5, 5, 9}, {2, 2, 7}) == 1.0); // arbitrary ids allowed
}

TEST_CASE("rand_index input validation") {
    CHECK_THROWS_AS(rand_index({0, 1}, {0}), input_error);
    CHECK_THROWS_AS(rand_index({0}, {0}), input_error); // needs at least one pair
}

TEST_CASE("rand_index is symmetric") {
    Rng rng(101);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = 2 + rng.below(40);
        auto a = oracles::random_labels(rng, n, 1 + rng.below(6));
        auto b = oracles::random_labels(rng, n, 1 + rng.below(6));
        CHECK(rand_index(a, b) == rand_index(b, a));
    }
}

TEST_CASE("rand_index ignores label names") {
    Rng rng(102);
    for (int t = 0; t < 50; ++t) {
        std::size_t n = 2 + rng.below(40);
        auto a = oracles::random_labels(rng, n, 4);
        auto b = oracles::random_labels(rng, n, 4);
        auto a2 = a;
        for (auto& l : a2)
            l = 1000 - 7 * l; // injective rename
        CHECK(rand_index(a, b) == rand_index(a2, b));
    }
}

TEST_CASE("contingency implementation equals pair enumeration") {
    Rng rng(103);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 2 + rng.below(49);
        auto a = oracles::random_labels(rng, n, 1 + rng.below(8));
        auto b = oracles::random_labels(rng, n, 1 + rng.below(8));
        CHECK(rand_index(a, b) == oracles::rand_index_pairs(a, b));
    }
}
