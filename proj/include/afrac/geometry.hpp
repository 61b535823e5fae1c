#pragma once

// Planar substrate: points, convex polygons (including point and segment
// degenerates), affine maps, Lebesgue measure, diameter and set distance.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "errors.hpp"

namespace afrac {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Axis-aligned bounding box.
struct Box {
    Point2 lo;
    Point2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

/// Euclidean distance between two boxes; 0 when they touch or overlap.
inline double box_distance(const Box& a, const Box& b) {
    const double dx = std::max({0.0, a.lo.x - b.hi.x, b.lo.x - a.hi.x});
    const double dy = std::max({0.0, a.lo.y - b.hi.y, b.lo.y - a.hi.y});
    return std::hypot(dx, dy);
}

/// Closed convex polygon stored counterclockwise.
///
/// One vertex denotes a point and two vertices a segment; both have zero area.
/// Convexity and vertex distinctness are checked relative to the polygon's own
/// extent so that deeply nested cells (far below the absolute geometric
/// tolerance) remain representable.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point2> vertices, double rel_tol = Tolerances{}.geom)
        : vertices_(std::move(vertices)) {
        if (vertices_.empty()) {
            throw InvalidGeometry("polygon needs at least one vertex");
        }
        for (const auto& v : vertices_) {
            if (!is_finite(v)) {
                throw InvalidGeometry("polygon vertex is not finite");
            }
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
                scale = std::max(scale, distance(vertices_[i], vertices_[j]));
            }
        }
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
                if (distance(vertices_[i], vertices_[j]) <= rel_tol * scale) {
                    throw InvalidGeometry("polygon vertices are not pairwise distinct");
                }
            }
        }
        if (vertices_.size() < 3) {
            return;
        }
        if (signed_area() < 0.0) {
            std::reverse(vertices_.begin(), vertices_.end());
        }
        if (signed_area() <= rel_tol * scale * scale) {
            throw InvalidGeometry("polygon with three or more vertices has no interior");
        }
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = vertices_[i];
            const Point2 edge = vertices_[(i + 1) % n] - a;
            for (std::size_t k = 0; k < n; ++k) {
                if (cross(edge, vertices_[k] - a) < -rel_tol * norm(edge) * scale) {
                    throw InvalidGeometry("polygon is not convex");
                }
            }
        }
    }

    std::span<const Point2> vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point2& operator[](std::size_t i) const { return vertices_[i]; }

    bool is_point() const { return vertices_.size() == 1; }
    bool is_segment() const { return vertices_.size() == 2; }
    bool has_interior() const { return vertices_.size() >= 3; }

    /// Signed shoelace area (positive for counterclockwise order).
    double signed_area() const {
        double twice = 0.0;
        const std::size_t n = vertices_.size();
        for (std::size_t i = 0; i < n; ++i) {
            twice += cross(vertices_[i], vertices_[(i + 1) % n]);
        }
        return 0.5 * twice;
    }

    Box bounds() const {
        Box box{vertices_.front(), vertices_.front()};
        for (const auto& v : vertices_) {
            box.lo.x = std::min(box.lo.x, v.x);
            box.lo.y = std::min(box.lo.y, v.y);
            box.hi.x = std::max(box.hi.x, v.x);
            box.hi.y = std::max(box.hi.y, v.y);
        }
        return box;
    }

    friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

private:
    std::vector<Point2> vertices_;
};

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Matrix2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    constexpr double det() const { return a * d - b * c; }

    friend constexpr Matrix2 operator*(const Matrix2& l, const Matrix2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend constexpr Point2 operator*(const Matrix2& m, Point2 p) {
        return {m.a * p.x + m.b * p.y, m.c * p.x + m.d * p.y};
    }
    friend constexpr bool operator==(const Matrix2&, const Matrix2&) = default;

    /// Largest singular value.
    double operator_norm() const {
        const double s = a * a + b * b + c * c + d * d;
        const double dt = det();
        const double disc = std::max(0.0, s * s - 4.0 * dt * dt);
        return std::sqrt(0.5 * (s + std::sqrt(disc)));
    }
};

/// x -> linear * x + translation.
class AffineMap2 {
public:
    constexpr AffineMap2() = default;

    AffineMap2(Matrix2 linear, Point2 translation) : linear_(linear), translation_(translation) {
        if (!std::isfinite(linear.a) || !std::isfinite(linear.b) || !std::isfinite(linear.c) ||
            !std::isfinite(linear.d) || !is_finite(translation)) {
            throw InvalidGeometry("affine map has non-finite entries");
        }
    }

    static AffineMap2 identity() { return {}; }
    static AffineMap2 scaling(double s, Point2 t = {}) { return {{s, 0.0, 0.0, s}, t}; }
    static AffineMap2 translation(Point2 t) { return {{}, t}; }

    const Matrix2& linear() const { return linear_; }
    const Point2& offset() const { return translation_; }
    double det() const { return linear_.det(); }
    double operator_norm() const { return linear_.operator_norm(); }

    bool is_contractive(double tol) const { return operator_norm() < 1.0 - tol; }

    /// |det| small relative to the squared largest singular value; scale-free so
    /// that long compositions of contractions are not flagged.
    bool is_singular(double tol) const {
        const double s = operator_norm();
        return s == 0.0 || std::abs(det()) <= tol * s * s;
    }

    Point2 operator()(Point2 p) const { return linear_ * p + translation_; }

    AffineMap2 inverse(double tol = Tolerances{}.geom) const {
        if (is_singular(tol)) {
            throw SingularMap("affine map is not invertible");
        }
        const double dt = det();
        const Matrix2 inv{linear_.d / dt, -linear_.b / dt, -linear_.c / dt, linear_.a / dt};
        return {inv, -1.0 * (inv * translation_)};
    }

    friend bool operator==(const AffineMap2&, const AffineMap2&) = default;

private:
    Matrix2 linear_{};
    Point2 translation_{};
};

/// The map x -> outer(inner(x)).
inline AffineMap2 compose(const AffineMap2& outer, const AffineMap2& inner) {
    return {outer.linear() * inner.linear(), outer.linear() * inner.offset() + outer.offset()};
}

/// Vertex-wise image; orientation-reversing maps are reordered to stay counterclockwise.
inline ConvexPolygon apply(const AffineMap2& map, const ConvexPolygon& polygon,
                           double tol = Tolerances{}.geom) {
    if (map.is_singular(tol)) {
        throw SingularMap("cannot apply a singular affine map to a polygon");
    }
    std::vector<Point2> image;
    image.reserve(polygon.size());
    for (const auto& v : polygon.vertices()) {
        image.push_back(map(v));
    }
    if (map.det() < 0.0) {
        std::reverse(image.begin(), image.end());
    }
    return ConvexPolygon(std::move(image), tol);
}

inline double area(const ConvexPolygon& p) { return p.has_interior() ? std::abs(p.signed_area()) : 0.0; }

/// Largest vertex-to-vertex distance; exact for convex sets.
inline double diameter(const ConvexPolygon& p) {
    double best = 0.0;
    const auto v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            best = std::max(best, distance(v[i], v[j]));
        }
    }
    return best;
}

/// Vertex average. Lies inside the polygon.
inline Point2 centroid(const ConvexPolygon& p) {
    Point2 sum{};
    for (const auto& v : p.vertices()) {
        sum = sum + v;
    }
    return (1.0 / static_cast<double>(p.size())) * sum;
}

namespace detail {

struct Segment {
    Point2 a;
    Point2 b;
};

inline std::vector<Segment> edges(const ConvexPolygon& p) {
    const auto v = p.vertices();
    if (v.size() == 1) {
        return {{v[0], v[0]}};
    }
    if (v.size() == 2) {
        return {{v[0], v[1]}};
    }
    std::vector<Segment> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back({v[i], v[(i + 1) % v.size()]});
    }
    return out;
}

inline double point_segment_distance(Point2 p, const Segment& s) {
    const Point2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) {
        return distance(p, s.a);
    }
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return distance(p, s.a + t * d);
}

inline bool properly_cross(const Segment& s, const Segment& t) {
    const double o1 = cross(s.b - s.a, t.a - s.a);
    const double o2 = cross(s.b - s.a, t.b - s.a);
    const double o3 = cross(t.b - t.a, s.a - t.a);
    const double o4 = cross(t.b - t.a, s.b - t.a);
    return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
           ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

inline double segment_distance(const Segment& s, const Segment& t) {
    if (properly_cross(s, t)) {
        return 0.0;
    }
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                     point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

/// Closed containment for polygons with interior (counterclockwise).
inline bool contains(const ConvexPolygon& p, Point2 q) {
    if (!p.has_interior()) {
        return false;
    }
    const auto v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (cross(v[(i + 1) % v.size()] - v[i], q - v[i]) < 0.0) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Distance from a point to the closed polygon (0 inside).
inline double distance(Point2 q, const ConvexPolygon& p) {
    if (detail::contains(p, q)) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : detail::edges(p)) {
        best = std::min(best, detail::point_segment_distance(q, e));
    }
    return best;
}

/// Minimum Euclidean distance between two closed convex polygons.
inline double min_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (detail::contains(a, b[0]) || detail::contains(b, a[0])) {
        return 0.0;
    }
    const auto ea = detail::edges(a);
    const auto eb = detail::edges(b);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : ea) {
        for (const auto& t : eb) {
            best = std::min(best, detail::segment_distance(s, t));
            if (best == 0.0) {
                return 0.0;
            }
        }
    }
    return best;
}

/// Area of the convex intersection (Sutherland-Hodgman clip of a against b).
inline double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (!a.has_interior() || !b.has_interior()) {
        return 0.0;
    }
    std::vector<Point2> subject(a.vertices().begin(), a.vertices().end());
    const auto clip = b.vertices();
    for (std::size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        const Point2 p = clip[i];
        const Point2 q = clip[(i + 1) % clip.size()];
        const auto side = [&](Point2 v) { return cross(q - p, v - p); };
        std::vector<Point2> out;
        out.reserve(subject.size() + 1);
        for (std::size_t k = 0; k < subject.size(); ++k) {
            const Point2 cur = subject[k];
            const Point2 nxt = subject[(k + 1) % subject.size()];
            const double sc = side(cur);
            const double sn = side(nxt);
            if (sc >= 0.0) {
                out.push_back(cur);
            }
            if ((sc >= 0.0) != (sn >= 0.0)) {
                const double t = sc / (sc - sn);
                out.push_back(cur + t * (nxt - cur));
            }
        }
        subject = std::move(out);
    }
    if (subject.size() < 3) {
        return 0.0;
    }
    double twice = 0.0;
    for (std::size_t k = 0; k < subject.size(); ++k) {
        twice += cross(subject[k], subject[(k + 1) % subject.size()]);
    }
    return std::max(0.0, 0.5 * twice);
}

/// Length of the common part of two segments; 0 unless they are collinear.
inline double intersection_length(const ConvexPolygon& a, const ConvexPolygon& b,
                                  double tol = Tolerances{}.geom) {
    if (!a.is_segment() || !b.is_segment()) {
        return 0.0;
    }
    const Point2 origin = a[0];
    const Point2 dir = a[1] - a[0];
    const double len = norm(dir);
    const Point2 u = (1.0 / len) * dir;
    const double scale = std::max(len, diameter(b));
    for (const auto& v : b.vertices()) {
        if (std::abs(cross(u, v - origin)) > tol * scale) {
            return 0.0;
        }
    }
    const double t0 = dot(b[0] - origin, u);
    const double t1 = dot(b[1] - origin, u);
    const double lo = std::max(0.0, std::min(t0, t1));
    const double hi = std::min(len, std::max(t0, t1));
    return std::max(0.0, hi - lo);
}

/// Which Lebesgue measure a scheme uses: planar area or (for segment schemes) length.
enum class MeasureKind { area, length };

inline std::string to_string(MeasureKind kind) { return kind == MeasureKind::area ? "area" : "length"; }

inline double measure(const ConvexPolygon& p, MeasureKind kind) {
    return kind == MeasureKind::area ? area(p) : (p.is_segment() ? diameter(p) : 0.0);
}

inline double intersection_measure(const ConvexPolygon& a, const ConvexPolygon& b, MeasureKind kind,
                                   double tol = Tolerances{}.geom) {
    return kind == MeasureKind::area ? intersection_area(a, b) : intersection_length(a, b, tol);
}

}  // namespace afrac
