#include "convexuq/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "convexuq/error.hpp"

namespace convexuq {

HullPolygon convex_hull(std::span<const Point2> input) {
    std::vector<Point2> pts(input.begin(), input.end());
    for (const auto& p : pts)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("non-finite point");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw Error("degenerate input");

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first

    HullPolygon out;
    if (hull.size() < 3) {
        out.degenerate = true;
        out.vertices = std::move(hull);
        return out;
    }
    out.area = polygon_area(hull);
    out.vertices = std::move(hull);
    return out;
}

double polygon_area(std::span<const Point2> v) {
    if (v.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        twice += v[j].x * v[i].y - v[i].x * v[j].y;
    return std::abs(twice) / 2.0;
}

std::size_t unique_rounded_count(std::span<const Point2> points, int decimals) {
    const double scale = std::pow(10.0, decimals);
    std::vector<Point2> rounded;
    rounded.reserve(points.size());
    // nearbyint honours the default FE_TONEAREST mode: ties go to even.
    for (const auto& p : points)
        rounded.push_back({std::nearbyint(p.x * scale) / scale, std::nearbyint(p.y * scale) / scale});
    std::sort(rounded.begin(), rounded.end());
    return static_cast<std::size_t>(
        std::distance(rounded.begin(), std::unique(rounded.begin(), rounded.end())));
}

}  // namespace convexuq
