#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "swards/cluster_state.hpp"
#include "swards/dissimilarity.hpp"
#include "swards/error.hpp"
#include "swards/geometry.hpp"

namespace swards {

// grid cells with no barrier-avoiding path to the data
constexpr int kUnreachable = -1;

// Wards assignment score: mean squared distance of x to cluster Y,
// (D({x},Y) - ss(Y)) / |Y|. Under Euclidean d this equals |x - mean|^2.
inline double wards_point_score(double Dx, const ClusterStats& y) {
    if (y.size == 0)
        throw input_error("wards_point_score: empty cluster");
    return (Dx - y.ss) / static_cast<double>(y.size);
}

// Spherical Wards assignment score, argmin-equivalent to the criterion's
// exact per-cluster derivative: ln ss + |Y| d2(x;Y)/ss - (1 + 2/N) ln|Y|.
inline double swards_point_score(double Dx, const ClusterStats& y, double N,
                                 double floor_abs) {
    if (y.size == 0)
        throw input_error("swards_point_score: empty cluster");
    if (N <= 0.0)
        throw input_error("swards_point_score: N must be positive");
    double ss = std::max(y.ss, floor_abs);
    if (ss <= 0.0)
        throw degenerate_error("swards_point_score: cluster with zero spread and no ss floor");
    double sz = static_cast<double>(y.size);
    return std::log(ss) + sz * wards_point_score(Dx, {y.size, ss}) / ss -
           (1.0 + 2.0 / N) * std::log(sz);
}

// ---------------------------------------------------------------------------
// weighted data sets: the derivative-check oracle
//
// Members carry nonnegative weights; |Y^w| = sum of weights, D and ss get the
// weighted double sums. With all weights 1 these reduce exactly to the
// unweighted definitions.

struct WeightedCluster {
    std::vector<Point> members;
    std::vector<double> weights;

    double total_weight() const {
        double s = 0.0;
        for (double w : weights)
            s += w;
        return s;
    }
};

inline double weighted_linkage_D(const WeightedCluster& Y, const WeightedCluster& Z,
                                 const Measure& measure) {
    double s = 0.0;
    for (std::size_t i = 0; i < Y.members.size(); ++i) {
        if (Y.weights[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < Z.members.size(); ++j) {
            if (Z.weights[j] == 0.0)
                continue;
            s += Y.weights[i] * Z.weights[j] * measure.d2(Y.members[i], Z.members[j]);
        }
    }
    return s;
}

inline double weighted_ss(const WeightedCluster& Y, const Measure& measure) {
    double w = Y.total_weight();
    if (w <= 0.0)
        throw input_error("weighted_ss: zero total weight");
    return weighted_linkage_D(Y, Y, measure) / (2.0 * w);
}

// Weighted criterion value. For the spherical flavor the cluster shares are
// normalized by ref_total, which defaults to the clusters' own total weight;
// derivative checks hold it at the unperturbed total so that the difference
// quotient matches the closed-form per-cluster derivative.
inline double weighted_energy(const std::vector<WeightedCluster>& clusters,
                              const Measure& measure, Flavor flavor, double N = 2.0,
                              double floor_abs = 0.0,
                              std::optional<double> ref_total = std::nullopt) {
    if (clusters.empty())
        throw input_error("weighted_energy: no clusters");
    if (flavor == Flavor::Wards) {
        double e = 0.0;
        for (const auto& c : clusters)
            e += weighted_ss(c, measure);
        return e;
    }
    if (N <= 0.0)
        throw input_error("weighted_energy: N must be positive");
    double total = 0.0;
    for (const auto& c : clusters)
        total += c.total_weight();
    double W = ref_total.value_or(total);
    if (W <= 0.0)
        throw input_error("weighted_energy: zero total weight");
    double B = (N + 2.0) / 2.0;
    double e = 0.5 * N * std::log(detail::kTwoPiE / N);
    for (const auto& c : clusters) {
        double mw = c.total_weight();
        if (mw <= 0.0)
            throw input_error("weighted_energy: zero-weight cluster");
        double ss = std::max(weighted_ss(c, measure), floor_abs);
        if (ss <= 0.0)
            throw degenerate_error("weighted_energy: cluster with zero spread and no floor");
        e += (mw / W) * (0.5 * N * std::log(ss) - B * std::log(mw / W));
    }
    return e;
}

// ss of an index set evaluated through a measure (no precomputed matrix);
// the i<j sum counts each unordered pair once, so ss = sum / |Y|
inline double cluster_ss_of(const std::vector<std::size_t>& mem,
                            const std::vector<Point>& points, const Measure& measure) {
    if (mem.empty())
        throw input_error("cluster_ss_of: empty cluster");
    double D = 0.0;
    for (std::size_t i = 0; i < mem.size(); ++i)
        for (std::size_t j = i + 1; j < mem.size(); ++j)
            D += measure.d2(points[mem[i]], points[mem[j]]);
    return D / static_cast<double>(mem.size());
}

// Per-cluster pair (finite-difference derivative, closed form) for attaching
// point x with infinitesimal weight. The numeric side perturbs the weighted
// energy at weight h with the share normalization held at the base total;
// the closed forms are the Wards score and, for the spherical flavor,
// (1/|X|) [ (N/2)(ln ss_i + |Y_i| d2(x;Y_i)/ss_i) - ((N+2)/2)(ln|Y_i| + 1) ].
inline std::vector<std::pair<double, double>>
derivative_check(const Point& x, const std::vector<std::vector<std::size_t>>& clusters,
                 const std::vector<Point>& points, const Measure& measure, Flavor flavor,
                 double N, double h, double floor_abs = 0.0) {
    if (h <= 0.0 || h > 1e-3)
        throw input_error("derivative_check: h must lie in (0, 1e-3]");
    std::vector<WeightedCluster> base;
    base.reserve(clusters.size());
    double W = 0.0;
    for (const auto& mem : clusters) {
        WeightedCluster c;
        for (std::size_t idx : mem) {
            c.members.push_back(points[idx]);
            c.weights.push_back(1.0);
        }
        W += c.total_weight();
        base.push_back(std::move(c));
    }
    double e0 = weighted_energy(base, measure, flavor, N, floor_abs, W);

    std::vector<std::pair<double, double>> out;
    double B = (N + 2.0) / 2.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto perturbed = base;
        perturbed[i].members.push_back(x);
        perturbed[i].weights.push_back(h);
        double e1 = weighted_energy(perturbed, measure, flavor, N, floor_abs, W);
        double numeric = (e1 - e0) / h;

        double sz = static_cast<double>(clusters[i].size());
        double Dx = 0.0;
        for (std::size_t idx : clusters[i])
            Dx += measure.d2(x, points[idx]);
        ClusterStats st{clusters[i].size(), cluster_ss_of(clusters[i], points, measure)};
        double closed;
        if (flavor == Flavor::Wards) {
            closed = wards_point_score(Dx, st);
        } else {
            double ss = std::max(st.ss, floor_abs);
            double d2xY = wards_point_score(Dx, {st.size, ss});
            closed = (0.5 * N * (std::log(ss) + sz * d2xY / ss) - B * (std::log(sz) + 1.0)) / W;
        }
        out.emplace_back(numeric, closed);
    }
    return out;
}

// ---------------------------------------------------------------------------
// rasterization

enum class ScoreCriterion { WardsKMeans, SphericalWards };

struct VoronoiGrid {
    Rect bbox;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<int> labels; // row-major, row j = 0 at ymin
    ScoreCriterion criterion = ScoreCriterion::WardsKMeans;

    int at(std::size_t i, std::size_t j) const { return labels[j * width + i]; }

    Vec2 cell_center(std::size_t i, std::size_t j) const {
        return {bbox.xmin + (static_cast<double>(i) + 0.5) / static_cast<double>(width) *
                                bbox.width(),
                bbox.ymin + (static_cast<double>(j) + 0.5) / static_cast<double>(height) *
                                bbox.height()};
    }
};

// Label every cell center with the cluster of minimal assignment score; ties
// go to the lowest cluster id. Cells a geodesic measure cannot reach get the
// unreachable sentinel.
inline VoronoiGrid rasterize(const std::vector<Point>& points, const std::vector<int>& labels,
                             int k, const Measure& measure, Rect bbox, std::size_t width,
                             std::size_t height, ScoreCriterion criterion,
                             const CriterionParams& params = {}, unsigned threads = 1) {
    if (points.size() != labels.size())
        throw input_error("rasterize: labels do not match points");
    if (width < 1 || height < 1)
        throw input_error("rasterize: grid must be at least 1x1");
    if (!bbox.valid())
        throw input_error("rasterize: bbox must have positive extent");
    if (k < 1)
        throw input_error("rasterize: need at least one cluster");
    for (const auto& p : points)
        if (p.size() != 2)
            throw input_error("rasterize: grid labeling needs 2-D data");

    auto by_cluster = detail::members_by_cluster(labels, k);
    for (const auto& mem : by_cluster)
        if (mem.empty())
            throw input_error("rasterize: partition has an empty cluster id");

    std::vector<ClusterStats> stats(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        stats[static_cast<std::size_t>(c)] = {by_cluster[static_cast<std::size_t>(c)].size(),
                                              cluster_ss_of(by_cluster[static_cast<std::size_t>(c)],
                                                            points, measure)};
    double floor_abs = 0.0;
    if (criterion == ScoreCriterion::SphericalWards) {
        // same relative floor convention as the criterion itself
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = 0; j < points.size(); ++j)
                if (i != j)
                    total += measure.d2(points[i], points[j]);
        double n = static_cast<double>(points.size());
        floor_abs = params.ss_floor_rel * total / (n * n);
    }

    VoronoiGrid grid;
    grid.bbox = bbox;
    grid.width = width;
    grid.height = height;
    grid.criterion = criterion;
    grid.labels.assign(width * height, kUnreachable);

    auto label_row = [&](std::size_t j) {
        std::vector<double> Dx(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < width; ++i) {
            Vec2 cv = grid.cell_center(i, j);
            Point cell{cv.x, cv.y};
            int best = kUnreachable;
            double best_score = std::numeric_limits<double>::infinity();
            try {
                for (int c = 0; c < k; ++c) {
                    double s = 0.0;
                    for (std::size_t idx : by_cluster[static_cast<std::size_t>(c)])
                        s += measure.d2(cell, points[idx]);
                    Dx[static_cast<std::size_t>(c)] = s;
                }
                for (int c = 0; c < k; ++c) {
                    const auto& st = stats[static_cast<std::size_t>(c)];
                    double score = criterion == ScoreCriterion::WardsKMeans
                                       ? wards_point_score(Dx[static_cast<std::size_t>(c)], st)
                                       : swards_point_score(Dx[static_cast<std::size_t>(c)], st,
                                                            params.N, floor_abs);
                    if (score < best_score) {
                        best_score = score;
                        best = c;
                    }
                }
            } catch (const unreachable_error&) {
                best = kUnreachable;
            }
            grid.labels[j * width + i] = best;
        }
    };

    if (threads <= 1) {
        for (std::size_t j = 0; j < height; ++j)
            label_row(j);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(height));
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t j = w; j < height; j += workers)
                        label_row(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err)
                        err = std::current_exception();
                }
            });
        }
        for (auto& t : pool)
            t.join();
        if (err)
            std::rethrow_exception(err);
    }
    return grid;
}

inline void write_grid_csv(const std::string& path, const VoronoiGrid& g) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write grid file: " + path);
    for (std::size_t j = 0; j < g.height; ++j)
        for (std::size_t i = 0; i < g.width; ++i)
            out << g.labels[j * g.width + i] << (i + 1 == g.width ? '\n' : ',');
}

// ASCII PGM, cluster ids spread evenly over 0..255, unreachable cells 255
inline void write_grid_pgm(const std::string& path, const VoronoiGrid& g, int k) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write grid file: " + path);
    out << "P2\n" << g.width << ' ' << g.height << "\n255\n";
    for (std::size_t j = 0; j < g.height; ++j) {
        for (std::size_t i = 0; i < g.width; ++i) {
            int l = g.labels[j * g.width + i];
            int v = l == kUnreachable ? 255 : (k <= 1 ? 0 : l * 255 / (k - 1));
            out << v << (i + 1 == g.width ? '\n' : ' ');
        }
    }
}

} // namespace swards
