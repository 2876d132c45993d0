#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "swards/cluster_state.hpp"
#include "swards/error.hpp"
#include "swards/rng.hpp"

namespace swards {

struct ClusteringConfig {
    Flavor flavor = Flavor::SphericalWards;
    CriterionParams params{};         // spherical Wards only
    std::size_t k = 2;                // Wards only: fixed cluster count
    std::size_t n_init_clusters = 10; // spherical Wards initial clusters
    double epsilon = 0.01;            // dissolve clusters below epsilon*|X|
    std::size_t max_sweeps = 200;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    std::size_t slots() const { return flavor == Flavor::Wards ? k : n_init_clusters; }

    void validate(std::size_t n) const {
        if (n < 2)
            throw input_error("solver: need at least 2 points");
        if (slots() < 1)
            throw input_error("solver: need at least 1 initial cluster");
        if (slots() > n)
            throw input_error("solver: more initial clusters than points");
        if (epsilon < 0.0 || epsilon >= 1.0)
            throw input_error("solver: epsilon must lie in [0, 1)");
        if (restarts < 1)
            throw input_error("solver: need at least 1 restart");
    }
};

struct SweepRecord {
    double energy_before = 0.0;
    double energy_after = 0.0;
    std::size_t moves = 0;
    std::size_t removed = 0; // clusters dissolved after this sweep
};

struct ClusteringResult {
    Partition partition;
    double energy = 0.0;
    std::size_t n_clusters = 0;
    std::size_t sweeps_run = 0;
    std::size_t restart_index = 0;
    std::vector<double> energy_trace; // post-sweep energies
    std::vector<SweepRecord> sweeps;
};

namespace detail {

// Best-move pass over all points in index order. A move is applied only if
// its delta clears the tolerance; deltas tied within the tolerance go to the
// lowest cluster id. Empty clusters are valid targets only in Wards mode
// (fixed k); in spherical mode they would sit at the ss floor and be culled
// by the epsilon rule anyway.
inline std::size_t sweep(ClusterState& st, double& energy) {
    std::size_t moves = 0;
    std::vector<double> rs;
    const int slots = st.slots();
    const bool allow_empty = st.flavor() == Flavor::Wards;
    for (std::size_t x = 0; x < st.n(); ++x) {
        int from = st.labels()[x];
        st.row_sums(x, rs);
        double tol = 1e-12 * (1.0 + std::abs(energy));
        double best_delta = 0.0;
        int best_to = -1;
        for (int t = 0; t < slots; ++t) {
            if (t == from)
                continue;
            if (!allow_empty && st.stats(t).size == 0)
                continue;
            double delta = st.move_delta(x, t, rs);
            if (delta >= -tol)
                continue;
            if (best_to < 0 || delta < best_delta - tol) {
                best_delta = delta;
                best_to = t;
            }
        }
        if (best_to >= 0) {
            st.apply_move(x, best_to, rs);
            energy += best_delta;
            ++moves;
        }
    }
    return moves;
}

// Dissolve non-empty clusters smaller than epsilon*|X|, smallest id-ties
// first; each orphaned point goes, in index order, to the surviving cluster
// with the minimal energy increase. Never dissolves the last live cluster.
inline std::size_t remove_small(ClusterState& st, double epsilon) {
    std::size_t removed = 0;
    double threshold = epsilon * static_cast<double>(st.n());
    std::vector<double> rs;
    for (;;) {
        int victim = -1;
        std::size_t vsize = 0;
        for (int c = 0; c < st.slots(); ++c) {
            std::size_t s = st.stats(c).size;
            if (s > 0 && static_cast<double>(s) < threshold &&
                (victim < 0 || s < vsize)) {
                victim = c;
                vsize = s;
            }
        }
        if (victim < 0 || st.live_clusters() <= 1)
            break;
        for (std::size_t x = 0; x < st.n(); ++x) {
            if (st.labels()[x] != victim)
                continue;
            st.row_sums(x, rs);
            double best_delta = std::numeric_limits<double>::infinity();
            int best_to = -1;
            for (int t = 0; t < st.slots(); ++t) {
                if (t == victim || st.stats(t).size == 0)
                    continue;
                double delta = st.move_delta(x, t, rs);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_to = t;
                }
            }
            st.apply_move(x, best_to, rs);
        }
        ++removed;
    }
    return removed;
}

inline ClusteringResult run_once(const DissimilarityMatrix& m, const ClusteringConfig& cfg,
                                 std::size_t restart_index) {
    Rng rng(cfg.seed ^ static_cast<std::uint64_t>(restart_index));
    auto slots = cfg.slots();
    std::vector<int> labels(m.n);
    for (auto& l : labels)
        l = static_cast<int>(rng.below(slots));

    ClusterState st(m, std::move(labels), static_cast<int>(slots), cfg.flavor, cfg.params);
    ClusteringResult res;
    res.restart_index = restart_index;

    for (std::size_t s = 0; s < cfg.max_sweeps; ++s) {
        st.rebuild_stats();
        SweepRecord rec;
        rec.energy_before = st.energy_from_stats();
        double energy = rec.energy_before;
        rec.moves = sweep(st, energy);
        rec.energy_after = st.energy_from_stats();
        if (cfg.flavor == Flavor::SphericalWards)
            rec.removed = remove_small(st, cfg.epsilon);
        res.sweeps.push_back(rec);
        res.energy_trace.push_back(rec.energy_after);
        ++res.sweeps_run;
        if (rec.moves == 0 && rec.removed == 0)
            break;
    }

    res.partition.labels = st.labels();
    res.partition.compact();
    res.n_clusters = static_cast<std::size_t>(res.partition.k);
    res.energy = cfg.flavor == Flavor::Wards
                     ? wards_energy(res.partition.labels, res.partition.k, m)
                     : swards_energy(res.partition.labels, res.partition.k, m, cfg.params);
    return res;
}

} // namespace detail

inline ClusteringResult best_of_restarts(const std::vector<ClusteringResult>& results) {
    if (results.empty())
        throw input_error("best_of_restarts: no results");
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].energy < results[best].energy)
            best = i;
    return results[best];
}

inline std::vector<ClusteringResult> cluster_all_restarts(const DissimilarityMatrix& m,
                                                          const ClusteringConfig& cfg) {
    cfg.validate(m.n);
    std::vector<ClusteringResult> out(cfg.restarts);
    unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads,
                                                       static_cast<unsigned>(cfg.restarts)));
    if (workers == 1) {
        for (std::size_t r = 0; r < cfg.restarts; ++r)
            out[r] = detail::run_once(m, cfg, r);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t r = w; r < cfg.restarts; r += workers)
                        out[r] = detail::run_once(m, cfg, r);
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
    return out;
}

// multi-restart front door: minimal final energy wins, ties to the lowest
// restart index
inline ClusteringResult cluster(const DissimilarityMatrix& m, const ClusteringConfig& cfg) {
    return best_of_restarts(cluster_all_restarts(m, cfg));
}

} // namespace swards
