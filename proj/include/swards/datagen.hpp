#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "swards/dissimilarity.hpp"
#include "swards/environment.hpp"
#include "swards/error.hpp"
#include "swards/geometry.hpp"
#include "swards/rng.hpp"

namespace swards {

struct LabeledPoints {
    std::vector<Point> points;
    std::vector<int> labels;
};

// ---------------------------------------------------------------------------
// Gaussian mixtures

struct MixtureComponent {
    double weight = 0.0;
    Point mean;
    double variance = 0.0; // isotropic
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    std::size_t n = 0;
    std::uint64_t seed = 0;

    void validate() const {
        if (components.empty())
            throw input_error("mixture: no components");
        double wsum = 0.0;
        std::size_t dim = components.front().mean.size();
        for (const auto& c : components) {
            if (c.variance <= 0.0)
                throw input_error("mixture: variances must be positive");
            if (c.weight < 0.0)
                throw input_error("mixture: weights must be nonnegative");
            if (c.mean.size() != dim || dim == 0)
                throw input_error("mixture: component means must share a dimension");
            wsum += c.weight;
        }
        if (std::abs(wsum - 1.0) > 1e-9)
            throw input_error("mixture: weights must sum to 1");
    }
};

inline LabeledPoints sample_mixture(const MixtureSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    LabeledPoints out;
    out.points.reserve(spec.n);
    out.labels.reserve(spec.n);
    std::size_t dim = spec.components.front().mean.size();
    for (std::size_t i = 0; i < spec.n; ++i) {
        double u = rng.uniform01();
        std::size_t c = 0;
        double acc = 0.0;
        for (; c + 1 < spec.components.size(); ++c) {
            acc += spec.components[c].weight;
            if (u < acc)
                break;
        }
        const auto& comp = spec.components[c];
        double sigma = std::sqrt(comp.variance);
        Point p(dim);
        for (std::size_t d = 0; d < dim; ++d)
            p[d] = comp.mean[d] + sigma * rng.normal();
        out.points.push_back(std::move(p));
        out.labels.push_back(static_cast<int>(c));
    }
    return out;
}

// Two spherical Gaussians of equal weight at (-1,0) and (1,0) whose variances
// r and 1-r trade off total scale.
inline MixtureSpec mixture_scale_preset(double r, std::size_t n, std::uint64_t seed) {
    if (r <= 0.0 || r >= 1.0)
        throw input_error("mixture-scale: r must lie in (0, 1)");
    MixtureSpec spec;
    spec.components = {{0.5, {-1.0, 0.0}, r}, {0.5, {1.0, 0.0}, 1.0 - r}};
    spec.n = n;
    spec.seed = seed;
    return spec;
}

// Same two centers, equal variances 1/2, weights omega and 1-omega.
inline MixtureSpec mixture_unbalanced_preset(double omega, std::size_t n,
                                             std::uint64_t seed) {
    if (omega <= 0.0 || omega >= 1.0)
        throw input_error("mixture-unbalanced: omega must lie in (0, 1)");
    MixtureSpec spec;
    spec.components = {{omega, {-1.0, 0.0}, 0.5}, {1.0 - omega, {1.0, 0.0}, 0.5}};
    spec.n = n;
    spec.seed = seed;
    return spec;
}

// ---------------------------------------------------------------------------
// lattice random walk populations

struct WalkSpec {
    Vec2 seed_point;
    std::size_t n = 1;   // population size
    std::size_t t = 0;   // time steps per individual
    double step = 0.0;   // 0 means 0.05 * min bbox extent
    Environment env;
    std::uint64_t seed = 0;
};

// Each individual starts at the seed and takes t uniform-random steps in one
// of the four axis directions; a step that would cross a barrier or leave
// the bbox is resampled, up to 100 tries, after which the individual stays
// put for that tick. Individuals use independent derived substreams.
inline std::vector<Vec2> random_walk(const WalkSpec& spec) {
    spec.env.validate();
    if (!spec.env.bbox.contains(spec.seed_point))
        throw input_error("random_walk: seed point outside bbox");
    double step = spec.step > 0.0
                      ? spec.step
                      : 0.05 * std::min(spec.env.bbox.width(), spec.env.bbox.height());
    const Vec2 dirs[4] = {{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}};
    std::vector<Vec2> out(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Rng rng(mix_seed(spec.seed, i));
        Vec2 pos = spec.seed_point;
        for (std::size_t tick = 0; tick < spec.t; ++tick) {
            for (int attempt = 0; attempt < 100; ++attempt) {
                Vec2 cand = pos + dirs[rng.below(4)];
                if (!spec.env.bbox.contains(cand))
                    continue;
                if (detail::blocked(pos, cand, spec.env.barriers))
                    continue;
                pos = cand;
                break;
            }
        }
        out[i] = pos;
    }
    return out;
}

// ---------------------------------------------------------------------------
// mouse-like set: one head disc, two ear discs, barriers almost separating
// the ears from the head

struct MouseParams {
    std::size_t n_head = 800;
    std::size_t n_ear = 200; // per ear
    std::uint64_t seed = 0;
    double head_r = 1.0;
    double ear_r = 0.35;
    Vec2 ear_center{0.9, 0.9}; // right ear; left ear mirrors across x = 0
    double opening = 0.2;      // length of chord left open
    double margin = 0.35;      // barrier extension past the chord
};

struct MouseData {
    LabeledPoints data; // labels: 0 head, 1 right ear, 2 left ear
    Environment env;
};

namespace detail {

inline Vec2 sample_disc(Rng& rng, Vec2 center, double radius) {
    for (;;) {
        double x = rng.uniform(-1.0, 1.0);
        double y = rng.uniform(-1.0, 1.0);
        if (x * x + y * y <= 1.0)
            return {center.x + radius * x, center.y + radius * y};
    }
}

} // namespace detail

// Barrier construction: head and ear circles overlap in a lens whose common
// chord lies on the radical line. The barrier runs along that chord,
// covering it from `margin` beyond one end up to `opening` short of the
// other, so a gap of exactly `opening` stays passable.
inline MouseData mouse_dataset(const MouseParams& p = {}) {
    if (p.n_head < 1 || p.n_ear < 1)
        throw input_error("mouse_dataset: counts must be at least 1");
    if (p.head_r <= 0.0 || p.ear_r <= 0.0)
        throw input_error("mouse_dataset: radii must be positive");

    MouseData out;
    Rng rng(p.seed);
    auto add = [&](Vec2 v, int label) {
        out.data.points.push_back({v.x, v.y});
        out.data.labels.push_back(label);
    };
    Vec2 right = p.ear_center;
    Vec2 left{-p.ear_center.x, p.ear_center.y};
    for (std::size_t i = 0; i < p.n_head; ++i)
        add(detail::sample_disc(rng, {0.0, 0.0}, p.head_r), 0);
    for (std::size_t i = 0; i < p.n_ear; ++i)
        add(detail::sample_disc(rng, right, p.ear_r), 1);
    for (std::size_t i = 0; i < p.n_ear; ++i)
        add(detail::sample_disc(rng, left, p.ear_r), 2);

    auto barrier_for = [&](Vec2 ear) -> Segment {
        double c2 = norm2(ear);
        double c = std::sqrt(c2);
        Vec2 u = (1.0 / c) * ear;
        // radical-line offset from the head center along u
        double offset = (c2 + p.head_r * p.head_r - p.ear_r * p.ear_r) / (2.0 * c);
        double half_chord2 = p.head_r * p.head_r - offset * offset;
        if (half_chord2 <= 0.0)
            throw input_error("mouse_dataset: discs do not overlap, no chord to block");
        double half_chord = std::sqrt(half_chord2);
        Vec2 P = offset * u;
        Vec2 v = perp(u); // for the right ear this points up-left, toward the head top
        if (v.y < 0.0)
            v = -1.0 * v;
        return {P + (-(half_chord + p.margin)) * v, P + (half_chord - p.opening) * v};
    };
    out.env.barriers = {barrier_for(right), barrier_for(left)};

    double ex = std::max(p.head_r, std::abs(p.ear_center.x) + p.ear_r) + 0.2;
    double ytop = std::max(p.head_r, p.ear_center.y + p.ear_r) + 0.2;
    out.env.bbox = {-ex, -(p.head_r + 0.2), ex, ytop};
    out.env.validate();
    return out;
}

} // namespace swards
