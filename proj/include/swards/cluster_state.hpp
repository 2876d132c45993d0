#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "swards/dissimilarity.hpp"
#include "swards/error.hpp"

namespace swards {

constexpr int kUnassigned = -1;

// assignment of data indices to clusters 0..k-1
struct Partition {
    std::vector<int> labels;
    int k = 0;

    // relabel non-empty clusters densely, preserving id order
    void compact() {
        int maxid = -1;
        for (int l : labels)
            maxid = std::max(maxid, l);
        std::vector<int> map(static_cast<std::size_t>(maxid) + 1, -1);
        for (int l : labels)
            if (l >= 0)
                map[l] = 0;
        int next = 0;
        for (auto& m : map)
            if (m == 0)
                m = next++;
        for (auto& l : labels)
            if (l >= 0)
                l = map[l];
        k = next;
    }
};

struct ClusterStats {
    std::size_t size = 0;
    double ss = 0.0;
};

struct CriterionParams {
    double N = 2.0;              // dimension parameter of the criterion
    double ss_floor_rel = 1e-12; // floor = rel * D(X,X) / |X|^2; 0 disables
};

// D(Y, Z) = sum over ordered pairs of squared dissimilarities
inline double linkage_D(const std::vector<std::size_t>& Y,
                        const std::vector<std::size_t>& Z,
                        const DissimilarityMatrix& m) {
    double s = 0.0;
    for (std::size_t y : Y)
        for (std::size_t z : Z)
            s += m.at(y, z);
    return s;
}

// within-cluster sum of squares, ss(Y) = D(Y,Y) / (2|Y|)
inline double cluster_ss(const std::vector<std::size_t>& Y, const DissimilarityMatrix& m) {
    if (Y.empty())
        throw input_error("cluster_ss: empty cluster");
    return linkage_D(Y, Y, m) / (2.0 * static_cast<double>(Y.size()));
}

// incremental update: x joins Y, Dx = D({x}, Y)
inline ClusterStats ss_add(const ClusterStats& y, double Dx) {
    std::size_t n = y.size;
    if (n == 0)
        return {1, 0.0};
    double nn = static_cast<double>(n);
    return {n + 1, nn / (nn + 1.0) * y.ss + Dx / (nn + 1.0)};
}

// incremental update: x leaves Y, Dx = D({x}, Y)
inline ClusterStats ss_remove(const ClusterStats& y, double Dx) {
    std::size_t n = y.size;
    if (n <= 1)
        return {0, 0.0};
    double nn = static_cast<double>(n);
    double ss = nn / (nn - 1.0) * y.ss - Dx / (nn - 1.0);
    return {n - 1, std::max(ss, 0.0)}; // clamp round-off
}

namespace detail {

inline std::vector<std::vector<std::size_t>> members_by_cluster(const std::vector<int>& labels,
                                                                int k) {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= k)
            throw input_error("partition: label out of range");
        out[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    return out;
}

constexpr double kTwoPiE = 17.079468445347131; // 2*pi*e

// one cluster's share of the spherical Wards sum
inline double swards_term(std::size_t size, double ss, std::size_t n, double N,
                          double floor_abs) {
    if (size == 0)
        return 0.0;
    double s = std::max(ss, floor_abs);
    if (s <= 0.0)
        throw degenerate_error("spherical Wards: cluster with zero spread and no ss floor");
    double p = static_cast<double>(size) / static_cast<double>(n);
    double B = (N + 2.0) / 2.0;
    return p * (0.5 * N * std::log(s) - B * std::log(p));
}

} // namespace detail

inline double wards_energy(const std::vector<int>& labels, int k,
                           const DissimilarityMatrix& m) {
    double e = 0.0;
    for (const auto& mem : detail::members_by_cluster(labels, k))
        if (!mem.empty())
            e += cluster_ss(mem, m);
    return e;
}

inline double swards_ss_floor(const DissimilarityMatrix& m, double ss_floor_rel) {
    double n = static_cast<double>(m.n);
    return ss_floor_rel * m.total() / (n * n);
}

inline double swards_energy(const std::vector<int>& labels, int k,
                            const DissimilarityMatrix& m, const CriterionParams& params) {
    if (params.N <= 0.0)
        throw input_error("spherical Wards: N must be positive");
    double floor_abs = swards_ss_floor(m, params.ss_floor_rel);
    double e = 0.5 * params.N * std::log(detail::kTwoPiE / params.N);
    for (const auto& mem : detail::members_by_cluster(labels, k))
        if (!mem.empty())
            e += detail::swards_term(mem.size(), cluster_ss(mem, m), m.n, params.N, floor_abs);
    return e;
}

// ---------------------------------------------------------------------------
// incremental engine used by the solver
//
// Caches per cluster only (size, ss); candidate moves recompute D({x}, Y_c)
// as row sums over the matrix, one O(|X|) pass giving the sums for every
// cluster at once.

enum class Flavor { SphericalWards, Wards };

class ClusterState {
  public:
    ClusterState(const DissimilarityMatrix& m, std::vector<int> labels, int slots,
                 Flavor flavor, const CriterionParams& params)
        : m_(&m), labels_(std::move(labels)), slots_(slots), flavor_(flavor), params_(params) {
        if (labels_.size() != m.n)
            throw input_error("cluster state: label count does not match matrix");
        if (flavor_ == Flavor::SphericalWards && params_.N <= 0.0)
            throw input_error("spherical Wards: N must be positive");
        floor_abs_ = swards_ss_floor(m, params_.ss_floor_rel);
        rebuild_stats();
    }

    std::size_t n() const { return m_->n; }
    int slots() const { return slots_; }
    const std::vector<int>& labels() const { return labels_; }
    const ClusterStats& stats(int c) const { return stats_[static_cast<std::size_t>(c)]; }
    double floor_abs() const { return floor_abs_; }
    Flavor flavor() const { return flavor_; }
    const CriterionParams& params() const { return params_; }

    std::size_t live_clusters() const {
        std::size_t k = 0;
        for (const auto& s : stats_)
            if (s.size > 0)
                ++k;
        return k;
    }

    // recompute all (size, ss) from the matrix; kills accumulated round-off
    void rebuild_stats() {
        stats_.assign(static_cast<std::size_t>(slots_), ClusterStats{});
        for (int l : labels_)
            if (l < 0 || l >= slots_)
                throw input_error("cluster state: label out of range");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            stats_[static_cast<std::size_t>(labels_[i])].size += 1;
        std::vector<double> dsum(static_cast<std::size_t>(slots_), 0.0);
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            const double* row = m_->row(i);
            auto c = static_cast<std::size_t>(labels_[i]);
            double s = 0.0;
            for (std::size_t j = 0; j < labels_.size(); ++j)
                if (static_cast<std::size_t>(labels_[j]) == c)
                    s += row[j];
            dsum[c] += s;
        }
        for (std::size_t c = 0; c < stats_.size(); ++c)
            if (stats_[c].size > 0)
                stats_[c].ss = dsum[c] / (2.0 * static_cast<double>(stats_[c].size));
    }

    // D({x}, Y_c) for every cluster slot c in one pass
    void row_sums(std::size_t x, std::vector<double>& out) const {
        out.assign(static_cast<std::size_t>(slots_), 0.0);
        const double* row = m_->row(x);
        for (std::size_t j = 0; j < labels_.size(); ++j)
            out[static_cast<std::size_t>(labels_[j])] += row[j];
    }

    double cluster_term(const ClusterStats& s) const {
        return detail::swards_term(s.size, s.ss, n(), params_.N, floor_abs_);
    }

    double energy_from_stats() const {
        if (flavor_ == Flavor::Wards) {
            double e = 0.0;
            for (const auto& s : stats_)
                e += s.ss;
            return e;
        }
        double e = 0.5 * params_.N * std::log(detail::kTwoPiE / params_.N);
        for (const auto& s : stats_)
            e += cluster_term(s);
        return e;
    }

    // energy change of moving x from its cluster to `to`, given row sums
    double move_delta(std::size_t x, int to, const std::vector<double>& rs) const {
        int from = labels_[x];
        if (to == from)
            return 0.0;
        const auto& sf = stats_[static_cast<std::size_t>(from)];
        const auto& st = stats_[static_cast<std::size_t>(to)];
        ClusterStats sf2 = ss_remove(sf, rs[static_cast<std::size_t>(from)]);
        ClusterStats st2 = ss_add(st, rs[static_cast<std::size_t>(to)]);
        if (flavor_ == Flavor::Wards)
            return (sf2.ss - sf.ss) + (st2.ss - st.ss);
        return (cluster_term(sf2) - cluster_term(sf)) +
               (cluster_term(st2) - cluster_term(st));
    }

    void apply_move(std::size_t x, int to, const std::vector<double>& rs) {
        int from = labels_[x];
        if (to == from)
            return;
        auto f = static_cast<std::size_t>(from);
        auto t = static_cast<std::size_t>(to);
        stats_[f] = ss_remove(stats_[f], rs[f]);
        stats_[t] = ss_add(stats_[t], rs[t]);
        labels_[x] = to;
    }

  private:
    const DissimilarityMatrix* m_;
    std::vector<int> labels_;
    int slots_;
    Flavor flavor_;
    CriterionParams params_;
    double floor_abs_ = 0.0;
    std::vector<ClusterStats> stats_;
};

// convenience wrapper used by tests: full-state move delta for a single move
inline double move_delta(const DissimilarityMatrix& m, const std::vector<int>& labels,
                         int slots, std::size_t x, int to, Flavor flavor,
                         const CriterionParams& params) {
    ClusterState st(m, labels, slots, flavor, params);
    std::vector<double> rs;
    st.row_sums(x, rs);
    return st.move_delta(x, to, rs);
}

} // namespace swards
