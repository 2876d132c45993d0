#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "swards/dissimilarity.hpp"
#include "swards/error.hpp"

namespace swards {

enum class ZeroDistancePolicy { SkipPair, Error };

struct DimEstimatorConfig {
    std::size_t k_min = 10;
    std::size_t k_max = 20;
    ZeroDistancePolicy zero_policy = ZeroDistancePolicy::SkipPair;
};

struct DimEstimate {
    double N = 0.0;                                  // averaged over k
    std::vector<std::pair<std::size_t, double>> per_k; // (k, N_k)
};

// Nearest-neighbor maximum-likelihood dimension estimate. Per point and per
// k, the mean log ratio (1/(k-1)) sum_j ln(d_k / d_j) over the k nearest
// neighbors estimates the inverse dimension; points are aggregated by
// inverse averaging, N_k = n / sum_x (that quantity), and N is the plain
// mean of N_k over k in [k_min, k_max]. Neighbor distances are square roots
// of the matrix entries, ascending, ties broken by index. Zero-distance
// neighbors (duplicates) are skipped term-wise under SkipPair with the mean
// renormalized; under Error they raise.
inline DimEstimate mle_dimension(const DissimilarityMatrix& m,
                                 const DimEstimatorConfig& cfg = {}) {
    std::size_t n = m.n;
    if (cfg.k_min < 2 || cfg.k_min > cfg.k_max)
        throw input_error("mle_dimension: need 2 <= k_min <= k_max");
    if (n <= cfg.k_max)
        throw input_error("mle_dimension: need more points than k_max");

    std::size_t kmax = cfg.k_max;
    // log distances to the kmax nearest neighbors of every point; duplicates
    // kept in rank order, flagged by -inf logs
    std::vector<std::vector<double>> logs(n);
    std::vector<std::pair<double, std::size_t>> nb;
    for (std::size_t x = 0; x < n; ++x) {
        nb.clear();
        nb.reserve(n - 1);
        const double* row = m.row(x);
        for (std::size_t j = 0; j < n; ++j)
            if (j != x)
                nb.emplace_back(std::sqrt(row[j]), j);
        std::partial_sort(nb.begin(), nb.begin() + static_cast<std::ptrdiff_t>(kmax),
                          nb.end());
        auto& lx = logs[x];
        lx.resize(kmax);
        for (std::size_t r = 0; r < kmax; ++r) {
            double d = nb[r].first;
            if (d <= 0.0) {
                if (cfg.zero_policy == ZeroDistancePolicy::Error)
                    throw degenerate_error("mle_dimension: zero distance between points " +
                                           std::to_string(x) + " and " +
                                           std::to_string(nb[r].second));
                lx[r] = -std::numeric_limits<double>::infinity();
            } else {
                lx[r] = std::log(d);
            }
        }
    }

    DimEstimate out;
    double acc = 0.0;
    for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
        double inv_sum = 0.0;
        std::size_t used = 0;
        for (std::size_t x = 0; x < n; ++x) {
            const auto& lx = logs[x];
            double lk = lx[k - 1];
            if (std::isinf(lk))
                continue; // k-th neighbor is a duplicate; nothing to measure
            double s = 0.0;
            std::size_t terms = 0;
            for (std::size_t j = 0; j + 1 < k; ++j) {
                if (std::isinf(lx[j]))
                    continue;
                s += lk - lx[j];
                ++terms;
            }
            if (terms == 0)
                continue;
            inv_sum += s / static_cast<double>(terms);
            ++used;
        }
        if (used == 0 || inv_sum <= 0.0)
            throw degenerate_error("mle_dimension: degenerate neighbor structure at k=" +
                                   std::to_string(k));
        double Nk = static_cast<double>(used) / inv_sum;
        out.per_k.emplace_back(k, Nk);
        acc += Nk;
    }
    out.N = acc / static_cast<double>(out.per_k.size());
    return out;
}

} // namespace swards
