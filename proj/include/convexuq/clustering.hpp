#pragma once

#include <cstddef>
#include <vector>

#include "convexuq/linalg.hpp"

namespace convexuq {

inline constexpr int kNoise = -1;

struct DbscanParams {
    double eps = 1.0;
    int min_samples = 3;
};

/// Per-point labels; kNoise for noise, 0..k-1 for clusters in discovery order.
struct ClusterLabels {
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    bool operator==(const ClusterLabels&) const = default;
};

/// base * t * scale. With the default factors this is numerically t.
double eps_from_temperature(double t, double base = 0.25, double scale = 4.0);

/// Classic DBSCAN over the rows of an n x 2 matrix. Euclidean distance,
/// closed eps-ball, self counted in its own neighborhood. Border points go to
/// the first cluster that reaches them when scanning seeds in index order.
ClusterLabels dbscan(const Matrix& points, const DbscanParams& params);

std::size_t count_clusters(const ClusterLabels& labels);

}  // namespace convexuq
