#pragma once

#include "sonoloc/geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sonoloc::localize {

struct ClusterParams {
    double radius = 0.030;      // meters
    double min_weight = 200.0;  // summed point weights inside the radius

    void validate() const;
};

struct Cluster {
    std::vector<std::size_t> members;  // ascending point indices
    double total_weight = 0.0;
};

/// Sum of weights within `radius` of each point, self included, summed in
/// ascending neighbor index order.
std::vector<double> neighborhood_weights(std::span<const Vec3> points, std::span<const double> weights,
                                         double radius, std::size_t jobs = 1);

/// DBSCAN with a weighted core condition: a point is core when its
/// neighborhood weight reaches min_weight. Clusters are grown breadth-first
/// from unvisited core points in ascending index order; a border point joins
/// the first cluster that reaches it. Non-core points no cluster reaches are
/// noise. Neighbor search uses a uniform hash grid with cell size = radius.
std::vector<Cluster> weighted_dbscan(std::span<const Vec3> points, std::span<const double> weights,
                                     const ClusterParams& params, std::size_t jobs = 1);

/// Index of the heaviest cluster; ties go to the cluster with the lowest
/// smallest member index.
std::optional<std::size_t> select_cluster(std::span<const Cluster> clusters);

}  // namespace sonoloc::localize
