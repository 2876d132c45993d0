#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "swards/environment.hpp"
#include "swards/error.hpp"
#include "swards/geometry.hpp"

namespace swards {

using Point = std::vector<double>;

// ---------------------------------------------------------------------------
// primitive measures

inline double euclidean_d2(const Point& x, const Point& y) {
    if (x.size() != y.size() || x.empty())
        throw input_error("euclidean_d2: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

// Kernel-induced squared distance for k(x,y) = exp(-|x-y|^2 / (2 sigma2)):
// d^2 = k(x,x) + k(y,y) - 2 k(x,y) = 2 (1 - k(x,y)), always in [0, 2].
inline double rbf_d2(const Point& x, const Point& y, double sigma2) {
    if (sigma2 <= 0.0)
        throw input_error("rbf_d2: sigma2 must be positive");
    double e2 = euclidean_d2(x, y);
    return 2.0 * (1.0 - std::exp(-e2 / (2.0 * sigma2)));
}

// Median of all pairwise squared Euclidean distances; the usual bandwidth
// heuristic. Even pair count takes the mean of the two middle values.
inline double median_sigma2(const std::vector<Point>& points) {
    std::size_t n = points.size();
    if (n < 2)
        throw input_error("median_sigma2: need at least 2 points");
    std::vector<double> d2;
    d2.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d2.push_back(euclidean_d2(points[i], points[j]));
    std::sort(d2.begin(), d2.end());
    std::size_t m = d2.size();
    double med = (m % 2 == 1) ? d2[m / 2] : 0.5 * (d2[m / 2 - 1] + d2[m / 2]);
    if (med <= 0.0)
        throw degenerate_error("median_sigma2: all pairwise distances are zero");
    return med;
}

// ---------------------------------------------------------------------------
// barrier geodesics
//
// Shortest polygonal path avoiding proper crossings of any barrier segment.
// Such a path only bends at barrier endpoints, so Dijkstra over the
// visibility graph of {x, y, endpoints} is exact.

namespace detail {

inline bool blocked(Vec2 p, Vec2 q, const std::vector<Segment>& barriers) {
    for (const auto& s : barriers)
        if (properly_cross(p, q, s))
            return true;
    return false;
}

// all-pairs geodesic distances between barrier endpoints
inline std::vector<double> endpoint_geodesics(const std::vector<Vec2>& eps,
                                              const std::vector<Segment>& barriers) {
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t m = eps.size();
    std::vector<double> g(m * m, inf);
    for (std::size_t i = 0; i < m; ++i) {
        g[i * m + i] = 0.0;
        for (std::size_t j = i + 1; j < m; ++j)
            if (!blocked(eps[i], eps[j], barriers)) {
                double d = dist(eps[i], eps[j]);
                g[i * m + j] = d;
                g[j * m + i] = d;
            }
    }
    // Floyd-Warshall; endpoint counts stay tiny
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i) {
            double gik = g[i * m + k];
            if (gik == inf)
                continue;
            for (std::size_t j = 0; j < m; ++j) {
                double via = gik + g[k * m + j];
                if (via < g[i * m + j])
                    g[i * m + j] = via;
            }
        }
    return g;
}

} // namespace detail

// Plain (non-squared) barrier-avoiding shortest-path length.
inline double barrier_d(Vec2 x, Vec2 y, const Environment& env) {
    if (x.x == y.x && x.y == y.y)
        return 0.0;
    if (!detail::blocked(x, y, env.barriers))
        return dist(x, y);

    std::vector<Vec2> eps;
    for (const auto& s : env.barriers) {
        eps.push_back(s.a);
        eps.push_back(s.b);
    }
    auto geo = detail::endpoint_geodesics(eps, env.barriers);
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t m = eps.size();
    double best = inf;
    for (std::size_t i = 0; i < m; ++i) {
        if (detail::blocked(x, eps[i], env.barriers))
            continue;
        double dx = dist(x, eps[i]);
        for (std::size_t j = 0; j < m; ++j) {
            double g = geo[i * m + j];
            if (g == inf || detail::blocked(eps[j], y, env.barriers))
                continue;
            best = std::min(best, dx + g + dist(eps[j], y));
        }
    }
    if (best == inf)
        throw unreachable_error("barrier_d: no barrier-avoiding path exists");
    return best;
}

// ---------------------------------------------------------------------------
// two-speed region metric
//
// Vertical border at x = border_x splits the plane into a slow side (x < b,
// distances scaled by slow_factor) and a fast side (x >= b). Cross-border
// distance is the infimum over border points z of s*|x_slow - z| + |z - y_fast|,
// approximated by 512 uniform border samples plus golden-section refinement.

namespace detail {

inline double golden_min(double lo, double hi, auto&& f, double tol) {
    const double gr = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

} // namespace detail

inline double region_d(Vec2 x, Vec2 y, const Environment& env) {
    if (!env.border_x)
        throw input_error("region_d: environment has no region border");
    if (!env.bbox.contains(x) || !env.bbox.contains(y))
        throw input_error("region_d: point outside environment bbox");
    double b = *env.border_x;
    double s = env.slow_factor;
    bool x_fast = x.x >= b;
    bool y_fast = y.x >= b;
    if (x_fast && y_fast)
        return dist(x, y);
    if (!x_fast && !y_fast)
        return s * dist(x, y);
    Vec2 slow = x_fast ? y : x;
    Vec2 fast = x_fast ? x : y;

    auto cost = [&](double t) {
        Vec2 z{b, t};
        return s * dist(slow, z) + dist(z, fast);
    };
    const int samples = 512;
    double ylo = env.bbox.ymin, yhi = env.bbox.ymax;
    double step = (yhi - ylo) / (samples - 1);
    int besti = 0;
    double bestv = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double v = cost(ylo + i * step);
        if (v < bestv) {
            bestv = v;
            besti = i;
        }
    }
    double lo = ylo + std::max(0, besti - 1) * step;
    double hi = ylo + std::min(samples - 1, besti + 1) * step;
    return detail::golden_min(lo, hi, cost, 1e-9);
}

// ---------------------------------------------------------------------------
// matrix of squared dissimilarities

struct DissimilarityMatrix {
    std::size_t n = 0;
    std::vector<double> a; // row-major n*n

    DissimilarityMatrix() = default;
    explicit DissimilarityMatrix(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    const double* row(std::size_t i) const { return a.data() + i * n; }

    // sum of all entries, i.e. D(X, X)
    double total() const {
        double s = 0.0;
        for (double v : a)
            s += v;
        return s;
    }

    void validate() const {
        if (a.size() != n * n)
            throw input_error("matrix: storage size does not match n");
        for (std::size_t i = 0; i < n; ++i) {
            if (at(i, i) != 0.0)
                throw input_error("matrix: nonzero diagonal at index " + std::to_string(i));
            for (std::size_t j = i + 1; j < n; ++j) {
                double u = at(i, j), v = at(j, i);
                if (u != v)
                    throw input_error("matrix: asymmetric entries at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
                if (!(u >= 0.0) || !std::isfinite(u))
                    throw input_error("matrix: negative or non-finite entry at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
};

// ---------------------------------------------------------------------------
// measure objects
//
// A measure evaluates squared dissimilarities between arbitrary points, which
// rasterization needs for points that were not part of the clustered set.
// All measures are immutable after construction.

class Measure {
  public:
    virtual ~Measure() = default;
    virtual double d2(const Point& x, const Point& y) const = 0;
    virtual std::string name() const = 0;
};

class EuclideanMeasure final : public Measure {
  public:
    double d2(const Point& x, const Point& y) const override {
        return euclidean_d2(x, y);
    }
    std::string name() const override { return "euclidean"; }
};

class RbfMeasure final : public Measure {
  public:
    explicit RbfMeasure(double sigma2) : sigma2_(sigma2) {
        if (sigma2 <= 0.0)
            throw input_error("rbf measure: sigma2 must be positive");
    }
    double d2(const Point& x, const Point& y) const override {
        return rbf_d2(x, y, sigma2_);
    }
    double sigma2() const { return sigma2_; }
    std::string name() const override { return "rbf"; }

  private:
    double sigma2_;
};

namespace detail {

inline Vec2 as_vec2(const Point& p) {
    if (p.size() != 2)
        throw input_error("geodesic measures need 2-D points");
    return {p[0], p[1]};
}

} // namespace detail

class BarrierMeasure final : public Measure {
  public:
    explicit BarrierMeasure(Environment env) : env_(std::move(env)) {
        env_.validate();
        for (const auto& s : env_.barriers) {
            eps_.push_back(s.a);
            eps_.push_back(s.b);
        }
        geo_ = detail::endpoint_geodesics(eps_, env_.barriers);
    }

    // plain path length; d2() squares it
    double d(Vec2 x, Vec2 y) const {
        if (x.x == y.x && x.y == y.y)
            return 0.0;
        if (!detail::blocked(x, y, env_.barriers))
            return dist(x, y);
        const double inf = std::numeric_limits<double>::infinity();
        std::size_t m = eps_.size();
        double best = inf;
        for (std::size_t i = 0; i < m; ++i) {
            if (detail::blocked(x, eps_[i], env_.barriers))
                continue;
            double dx = dist(x, eps_[i]);
            if (dx >= best)
                continue;
            for (std::size_t j = 0; j < m; ++j) {
                double g = geo_[i * m + j];
                if (g == inf || dx + g >= best)
                    continue;
                if (detail::blocked(eps_[j], y, env_.barriers))
                    continue;
                best = std::min(best, dx + g + dist(eps_[j], y));
            }
        }
        if (best == inf)
            throw unreachable_error("barrier measure: no path exists");
        return best;
    }

    double d2(const Point& x, const Point& y) const override {
        double v = d(detail::as_vec2(x), detail::as_vec2(y));
        return v * v;
    }
    const Environment& env() const { return env_; }
    std::string name() const override { return "barrier"; }

  private:
    Environment env_;
    std::vector<Vec2> eps_;
    std::vector<double> geo_;
};

class RegionMeasure final : public Measure {
  public:
    explicit RegionMeasure(Environment env) : env_(std::move(env)) {
        env_.validate();
        if (!env_.border_x)
            throw input_error("region measure: environment has no border_x");
    }
    double d2(const Point& x, const Point& y) const override {
        double v = region_d(detail::as_vec2(x), detail::as_vec2(y), env_);
        return v * v;
    }
    const Environment& env() const { return env_; }
    std::string name() const override { return "region"; }

  private:
    Environment env_;
};

inline DissimilarityMatrix build_matrix(const std::vector<Point>& points,
                                        const Measure& measure) {
    std::size_t n = points.size();
    if (n < 1)
        throw input_error("build_matrix: empty point set");
    DissimilarityMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = measure.d2(points[i], points[j]);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    return m;
}

// ---------------------------------------------------------------------------
// matrix file formats: CSV (n rows of n decimals) or binary
// (8-byte little-endian count, then n*n little-endian doubles, row-major)

namespace detail {

inline std::uint64_t to_le64(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little)
        return v;
    else
        return __builtin_bswap64(v);
}

inline bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

} // namespace detail

inline DissimilarityMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open matrix file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cell, &pos);
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                    ++pos;
                if (pos != cell.size())
                    throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw input_error("matrix " + path + " line " + std::to_string(lineno) +
                                  ": bad number '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    std::size_t n = rows.size();
    if (n == 0)
        throw input_error("matrix " + path + ": empty file");
    DissimilarityMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw input_error("matrix " + path + ": row " + std::to_string(i + 1) + " has " +
                              std::to_string(rows[i].size()) + " columns, expected " +
                              std::to_string(n));
        for (std::size_t j = 0; j < n; ++j)
            m.at(i, j) = rows[i][j];
    }
    m.validate();
    return m;
}

inline DissimilarityMatrix read_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open matrix file: " + path);
    std::uint64_t n_raw = 0;
    in.read(reinterpret_cast<char*>(&n_raw), 8);
    if (!in)
        throw input_error("matrix " + path + ": truncated header");
    std::uint64_t n = detail::to_le64(n_raw);
    if (n == 0 || n > (1u << 20))
        throw input_error("matrix " + path + ": implausible size " + std::to_string(n));
    DissimilarityMatrix m(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(m.a.data()),
            static_cast<std::streamsize>(sizeof(double) * m.a.size()));
    if (!in)
        throw input_error("matrix " + path + ": truncated payload");
    if constexpr (std::endian::native != std::endian::little) {
        for (double& v : m.a) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            bits = __builtin_bswap64(bits);
            std::memcpy(&v, &bits, 8);
        }
    }
    m.validate();
    return m;
}

inline DissimilarityMatrix read_matrix(const std::string& path) {
    return detail::has_suffix(path, ".bin") ? read_matrix_binary(path)
                                            : read_matrix_csv(path);
}

inline void write_matrix_csv(const std::string& path, const DissimilarityMatrix& m) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write matrix file: " + path);
    char buf[40];
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
            out << buf << (j + 1 == m.n ? '\n' : ',');
        }
    }
}

inline void write_matrix_binary(const std::string& path, const DissimilarityMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error("cannot write matrix file: " + path);
    std::uint64_t n = detail::to_le64(m.n);
    out.write(reinterpret_cast<const char*>(&n), 8);
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(m.a.data()),
                  static_cast<std::streamsize>(sizeof(double) * m.a.size()));
    } else {
        for (double v : m.a) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            bits = __builtin_bswap64(bits);
            out.write(reinterpret_cast<const char*>(&bits), 8);
        }
    }
}

} // namespace swards
