#include "convexuq/clustering.hpp"

#include <cmath>
#include <deque>
#include <set>

#include "convexuq/error.hpp"

namespace convexuq {

namespace {

constexpr int kUnvisited = -2;

std::vector<std::size_t> region_query(const Matrix& points, std::size_t i, double eps2) {
    std::vector<std::size_t> out;
    const double x = points(i, 0), y = points(i, 1);
    for (std::size_t j = 0; j < points.rows(); ++j) {
        const double dx = points(j, 0) - x, dy = points(j, 1) - y;
        if (dx * dx + dy * dy <= eps2) out.push_back(j);
    }
    return out;
}

}  // namespace

double eps_from_temperature(double t, double base, double scale) {
    if (!(t > 0.0)) throw Error("non-positive temperature");
    return base * t * scale;
}

ClusterLabels dbscan(const Matrix& points, const DbscanParams& params) {
    if (!(params.eps > 0.0) || params.min_samples < 1) throw Error("invalid dbscan parameters");
    const std::size_t n = points.rows();
    if (n > 0 && points.cols() != 2) throw Error("dbscan expects 2D points");

    const double eps2 = params.eps * params.eps;
    const auto min_samples = static_cast<std::size_t>(params.min_samples);
    std::vector<int> labels(n, kUnvisited);
    int next_cluster = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        const auto seeds = region_query(points, i, eps2);
        if (seeds.size() < min_samples) {
            labels[i] = kNoise;  // may be claimed later as a border point
            continue;
        }
        const int cluster = next_cluster++;
        labels[i] = cluster;
        std::deque<std::size_t> frontier(seeds.begin(), seeds.end());
        while (!frontier.empty()) {
            const std::size_t j = frontier.front();
            frontier.pop_front();
            if (labels[j] == kNoise) {
                labels[j] = cluster;
                continue;  // noise here means non-core: border, do not expand
            }
            if (labels[j] != kUnvisited) continue;
            labels[j] = cluster;
            const auto nbrs = region_query(points, j, eps2);
            if (nbrs.size() >= min_samples) frontier.insert(frontier.end(), nbrs.begin(), nbrs.end());
        }
    }
    return {std::move(labels)};
}

std::size_t count_clusters(const ClusterLabels& labels) {
    std::set<int> unique(labels.labels.begin(), labels.labels.end());
    return unique.size() - (unique.count(kNoise) ? 1 : 0);
}

}  // namespace convexuq
