#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "swards/intrinsic_dim.hpp"
#include "oracles.hpp"

using namespace swards;
using Catch::Approx;

namespace {

std::vector<Point> uniform_cube(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<Point> pts(n);
    for (auto& p : pts) {
        p.resize(dim);
        for (auto& c : p)
            c = rng.uniform01();
    }
    return pts;
}

} // namespace

TEST_CASE("segment and square recover their dimension") {
    Rng rng(12345);
    auto seg = uniform_cube(rng, 1000, 1);
    auto est1 = mle_dimension(oracles::euclidean_matrix(seg));
    CHECK(est1.N == Approx(1.0).margin(0.25));

    auto sq = uniform_cube(rng, 1000, 2);
    auto est2 = mle_dimension(oracles::euclidean_matrix(sq));
    CHECK(est2.N == Approx(2.0).margin(0.35));

    CHECK(est1.per_k.size() == 11); // k from 10 to 20
    CHECK(est1.per_k.front().first == 10);
    CHECK(est1.per_k.back().first == 20);
}

TEST_CASE("estimate is scale invariant") {
    Rng rng(77);
    auto pts = uniform_cube(rng, 300, 2);
    auto m = oracles::euclidean_matrix(pts);
    auto base = mle_dimension(m);
    for (double lambda : {0.01, 3.0, 1000.0}) {
        auto scaled = m;
        for (auto& v : scaled.a)
            v *= lambda * lambda;
        auto est = mle_dimension(scaled);
        CHECK(est.N == Approx(base.N).margin(1e-9));
    }
}

TEST_CASE("estimate is permutation invariant") {
    Rng rng(78);
    auto pts = uniform_cube(rng, 200, 2);
    auto m = oracles::euclidean_matrix(pts);
    auto reversed = pts;
    std::reverse(reversed.begin(), reversed.end());
    auto mr = oracles::euclidean_matrix(reversed);
    CHECK(mle_dimension(m).N == Approx(mle_dimension(mr).N).margin(1e-12));
}

TEST_CASE("hand-checked estimate on four points") {
    auto m = oracles::euclidean_matrix({{0}, {1}, {2}, {4}});
    DimEstimatorConfig cfg;
    cfg.k_min = 2;
    cfg.k_max = 2;
    auto est = mle_dimension(m, cfg);
    double expect = 4.0 / (2.0 * std::log(2.0) + std::log(1.5));
    CHECK(est.N == Approx(expect).epsilon(1e-12));
    REQUIRE(est.per_k.size() == 1);
    CHECK(est.per_k[0].second == Approx(expect).epsilon(1e-12));
}

TEST_CASE("duplicate points under both zero policies") {
    auto m = oracles::euclidean_matrix({{0}, {0}, {1}, {3}});
    DimEstimatorConfig cfg;
    cfg.k_min = 3;
    cfg.k_max = 3;

    cfg.zero_policy = ZeroDistancePolicy::Error;
    CHECK_THROWS_AS(mle_dimension(m, cfg), degenerate_error);

    cfg.zero_policy = ZeroDistancePolicy::SkipPair;
    auto est = mle_dimension(m, cfg);
    // duplicate terms drop out and the per-point means renormalize
    double inv = 2.0 * std::log(3.0) + std::log(2.0) + 0.5 * std::log(1.5);
    CHECK(est.N == Approx(4.0 / inv).epsilon(1e-12));
}

TEST_CASE("skip still works on a noisy segment with duplicates") {
    Rng rng(79);
    auto pts = uniform_cube(rng, 500, 1);
    // clone a handful of points exactly
    for (int i = 0; i < 10; ++i)
        pts.push_back(pts[static_cast<std::size_t>(i) * 7]);
    auto est = mle_dimension(oracles::euclidean_matrix(pts));
    CHECK(est.N == Approx(1.0).margin(0.25));
}

TEST_CASE("all-duplicate neighborhoods are degenerate") {
    auto m = oracles::euclidean_matrix({{0}, {0}, {0}, {1}});
    DimEstimatorConfig cfg;
    cfg.k_min = 3;
    cfg.k_max = 3;
    CHECK_THROWS_AS(mle_dimension(m, cfg), degenerate_error);
}

TEST_CASE("config validation") {
    Rng rng(80);
    auto m = oracles::euclidean_matrix(uniform_cube(rng, 30, 2));

    DimEstimatorConfig cfg;
    cfg.k_min = 1;
    CHECK_THROWS_AS(mle_dimension(m, cfg), input_error);

    cfg.k_min = 5;
    cfg.k_max = 4;
    CHECK_THROWS_AS(mle_dimension(m, cfg), input_error);

    cfg.k_min = 5;
    cfg.k_max = 30; // needs n > k_max
    CHECK_THROWS_AS(mle_dimension(m, cfg), input_error);
}
