#pragma once

#include <vector>

#include "foggrid/matrix.hpp"
#include "foggrid/sim.hpp"

namespace foggrid::graph {

/// Assignment of every intersection to exactly one fog node. Fog membership
/// restricts the adjacency an agent sees; it never changes the traffic itself.
struct FogPartition {
    std::vector<int> assignment;  // intersection index -> fog id
    int fog_count = 0;

    void validate(int intersection_count) const;  // throws ConfigError
    std::vector<std::vector<int>> members() const;
};

/// Fixed feature layout: per intersection the 6 lane slots (E-through,
/// E-left, W-through, W-left, N-shared, S-shared), each contributing
/// (wait, wave) scaled into [0, 1]. F = 12.
struct FeatureLayout {
    double wait_scale_s = 120.0;
    double wave_scale_veh = 50.0;

    static constexpr int feature_dim = 2 * sim::kLaneSlots;
};

struct GraphObservation {
    nn::Matrix features;   // N x F
    nn::Matrix adjacency;  // N x N, self-loops on the diagonal
};

/// A[i][j] = 1 iff i == j, or i and j are road-connected neighbors in the
/// same fog. Symmetric with unit diagonal; block-diagonal across fogs.
nn::Matrix build_adjacency(const sim::RoadNetwork& net, const FogPartition& partition);

/// N x F matrix of scaled (wait, wave) pairs, clamped to [0, 1]; absent lane
/// slots contribute zeros.
nn::Matrix build_features(const sim::RoadNetwork& net, const FeatureLayout& layout);

struct PresetPartitions {
    FogPartition fully_observable;
    FogPartition two_fog_rows;
};

/// The case-study presets: one fog over everything, and top-row/bottom-row
/// fogs (the latter requires a 2-row grid).
PresetPartitions preset_partitions(const sim::RoadNetwork& net);
FogPartition fully_observable_partition(const sim::RoadNetwork& net);
FogPartition two_fog_rows_partition(const sim::RoadNetwork& net);

/// Per-intersection reward: -(sum over lane slots of sigma1 * wait +
/// sigma2 * wave) / reward_scale, on raw (unscaled) observables.
std::vector<double> per_node_reward(const sim::RoadNetwork& net, double sigma1, double sigma2,
                                    const FeatureLayout& layout, double reward_scale);

GraphObservation observe(const sim::RoadNetwork& net, const FogPartition& partition,
                         const FeatureLayout& layout);

}  // namespace foggrid::graph
