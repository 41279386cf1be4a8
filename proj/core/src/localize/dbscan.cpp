#include "sonoloc/localize/dbscan.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

namespace sonoloc::localize {

namespace {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

class HashGrid {
public:
    HashGrid(std::span<const Vec3> points, double cell) : points_(points), inv_(1.0 / cell) {
        for (std::size_t i = 0; i < points.size(); ++i) cells_[key(points[i])].push_back(i);
    }

    // Neighbors within radius (inclusive), ascending.
    void query(std::size_t i, double radius, std::vector<std::size_t>& out) const {
        out.clear();
        const Vec3& p = points_[i];
        const CellKey c = key(p);
        const double r2 = radius * radius;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    const auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
                    if (it == cells_.end()) continue;
                    for (std::size_t j : it->second) {
                        if ((points_[j] - p).squaredNorm() <= r2) out.push_back(j);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
    }

private:
    CellKey key(const Vec3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x() * inv_)), static_cast<std::int64_t>(std::floor(p.y() * inv_)),
                static_cast<std::int64_t>(std::floor(p.z() * inv_))};
    }

    std::span<const Vec3> points_;
    double inv_;
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

void check_inputs(std::span<const Vec3> points, std::span<const double> weights) {
    if (points.size() != weights.size()) throw DimensionMismatch("points and weights differ in length");
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("point weights must be finite and >= 0");
    }
    for (const Vec3& p : points) {
        if (!p.allFinite()) throw InvalidArgument("point coordinates must be finite");
    }
}

}  // namespace

void ClusterParams::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("cluster radius must be positive");
    if (!(min_weight > 0.0) || !std::isfinite(min_weight)) throw InvalidArgument("min cluster weight must be positive");
}

std::vector<double> neighborhood_weights(std::span<const Vec3> points, std::span<const double> weights, double radius,
                                         std::size_t jobs) {
    check_inputs(points, weights);
    if (!(radius > 0.0)) throw InvalidArgument("cluster radius must be positive");
    const HashGrid grid(points, radius);
    std::vector<double> sums(points.size(), 0.0);
    const std::size_t block = 1024;
    const std::size_t blocks = (points.size() + block - 1) / block;
    parallel_for(blocks, jobs, [&](std::size_t b) {
        std::vector<std::size_t> nb;
        const std::size_t end = std::min(points.size(), (b + 1) * block);
        for (std::size_t i = b * block; i < end; ++i) {
            grid.query(i, radius, nb);
            double s = 0.0;
            for (std::size_t j : nb) s += weights[j];
            sums[i] = s;
        }
    });
    return sums;
}

std::vector<Cluster> weighted_dbscan(std::span<const Vec3> points, std::span<const double> weights,
                                     const ClusterParams& params, std::size_t jobs) {
    params.validate();
    check_inputs(points, weights);
    const std::size_t n = points.size();
    std::vector<Cluster> clusters;
    if (n == 0) return clusters;

    const std::vector<double> sums = neighborhood_weights(points, weights, params.radius, jobs);
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = sums[i] >= params.min_weight;

    const HashGrid grid(points, params.radius);
    constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(n, kUnassigned);
    std::vector<std::size_t> nb;
    std::deque<std::size_t> frontier;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!core[seed] || label[seed] != kUnassigned) continue;
        const std::size_t id = clusters.size();
        clusters.emplace_back();
        label[seed] = id;
        frontier.push_back(seed);
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop_front();
            grid.query(p, params.radius, nb);
            for (std::size_t q : nb) {
                if (label[q] != kUnassigned) continue;
                label[q] = id;
                if (core[q]) frontier.push_back(q);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] == kUnassigned) continue;
        Cluster& c = clusters[label[i]];
        c.members.push_back(i);
        c.total_weight += weights[i];
    }
    return clusters;
}

std::optional<std::size_t> select_cluster(std::span<const Cluster> clusters) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (clusters[i].members.empty()) continue;
        if (!best) {
            best = i;
            continue;
        }
        const Cluster& b = clusters[*best];
        const Cluster& c = clusters[i];
        if (c.total_weight > b.total_weight ||
            (c.total_weight == b.total_weight && c.members.front() < b.members.front())) {
            best = i;
        }
    }
    return best;
}

}  // namespace sonoloc::localize
