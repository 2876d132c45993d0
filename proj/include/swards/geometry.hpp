#pragma once

#include <cmath>

namespace swards {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

struct Segment {
    Vec2 a;
    Vec2 b;
};

struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool valid() const { return xmax > xmin && ymax > ymin; }
};

// Sign of the area of triangle (a, b, c).
inline double orient(Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, c - a);
}

// Proper (transversal) intersection of open segments pq and s. Touching an
// endpoint or running collinearly does not count, so paths may pivot on
// barrier endpoints and slide along barriers.
inline bool properly_cross(Vec2 p, Vec2 q, const Segment& s) {
    double o1 = orient(p, q, s.a);
    double o2 = orient(p, q, s.b);
    double o3 = orient(s.a, s.b, p);
    double o4 = orient(s.a, s.b, q);
    return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
           ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

} // namespace swards
