#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace convexuq {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    auto operator<=>(const Point2&) const = default;
};

/// Twice the signed area of triangle (o, a, b); positive for a left turn.
inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

struct HullPolygon {
    std::vector<Point2> vertices;  // CCW from the lexicographically smallest vertex
    double area = 0.0;
    bool degenerate = false;       // collinear input; fewer than 3 vertices, area 0
};

/// Andrew's monotone chain. Collinear boundary points are dropped.
/// Throws Error("degenerate input") for fewer than 3 distinct points.
HullPolygon convex_hull(std::span<const Point2> points);

/// Absolute shoelace area; 0 for fewer than 3 vertices.
double polygon_area(std::span<const Point2> vertices);

/// Distinct points after rounding each coordinate to `decimals` places
/// (round half to even).
std::size_t unique_rounded_count(std::span<const Point2> points, int decimals = 6);

}  // namespace convexuq
