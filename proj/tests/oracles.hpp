#pragma once

// Test-only reference implementations, kept deliberately naive so the
// production code paths have something independent to disagree with.

#include <cstdint>
#include <vector>

#include "swards/cluster_state.hpp"
#include "swards/dissimilarity.hpp"
#include "swards/rng.hpp"

namespace oracles {

using swards::DissimilarityMatrix;
using swards::Point;
using swards::Rng;

// sum of squared deviations from the mean; equals ss under Euclidean d
inline double euclidean_trace(const std::vector<Point>& Y) {
    if (Y.empty())
        return 0.0;
    std::size_t dim = Y[0].size();
    Point m(dim, 0.0);
    for (const auto& y : Y)
        for (std::size_t d = 0; d < dim; ++d)
            m[d] += y[d];
    for (std::size_t d = 0; d < dim; ++d)
        m[d] /= static_cast<double>(Y.size());
    double s = 0.0;
    for (const auto& y : Y)
        for (std::size_t d = 0; d < dim; ++d)
            s += (y[d] - m[d]) * (y[d] - m[d]);
    return s;
}

// O(n^2) pair-enumeration Rand index
inline double rand_index_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t n = a.size();
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool sa = a[i] == a[j];
            bool sb = b[i] == b[j];
            if (sa == sb)
                ++agree;
            ++total;
        }
    return static_cast<double>(agree) / static_cast<double>(total);
}

inline std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t dim,
                                        double scale = 1.0) {
    std::vector<Point> pts(n, Point(dim));
    for (auto& p : pts)
        for (auto& v : p)
            v = scale * rng.normal();
    return pts;
}

inline DissimilarityMatrix euclidean_matrix(const std::vector<Point>& pts) {
    swards::EuclideanMeasure eu;
    return swards::build_matrix(pts, eu);
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n, int k) {
    std::vector<int> l(n);
    for (auto& v : l)
        v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    return l;
}

// labels such that every id in 0..k-1 is used at least once
inline std::vector<int> random_labels_covering(Rng& rng, std::size_t n, int k) {
    auto l = random_labels(rng, n, k);
    for (int c = 0; c < k; ++c)
        l[static_cast<std::size_t>(c) % n] = c;
    return l;
}

inline std::vector<std::size_t> members_of(const std::vector<int>& labels, int c) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == c)
            out.push_back(i);
    return out;
}

} // namespace oracles
