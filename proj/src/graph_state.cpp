#include "foggrid/graph_state.hpp"

#include <algorithm>
#include <string>

#include "foggrid/errors.hpp"

namespace foggrid::graph {

void FogPartition::validate(int intersection_count) const {
    if (static_cast<int>(assignment.size()) != intersection_count)
        throw ConfigError("fog partition covers " + std::to_string(assignment.size()) +
                          " intersections, network has " + std::to_string(intersection_count));
    if (fog_count < 1) throw ConfigError("fog partition needs at least one fog");
    std::vector<int> sizes(fog_count, 0);
    for (size_t i = 0; i < assignment.size(); ++i) {
        const int f = assignment[i];
        if (f < 0 || f >= fog_count)
            throw ConfigError("intersection " + std::to_string(i) +
                              " assigned to invalid fog " + std::to_string(f));
        ++sizes[f];
    }
    for (int f = 0; f < fog_count; ++f)
        if (sizes[f] == 0) throw ConfigError("fog " + std::to_string(f) + " is empty");
}

std::vector<std::vector<int>> FogPartition::members() const {
    std::vector<std::vector<int>> out(fog_count);
    for (size_t i = 0; i < assignment.size(); ++i)
        out[assignment[i]].push_back(static_cast<int>(i));
    return out;
}

nn::Matrix build_adjacency(const sim::RoadNetwork& net, const FogPartition& partition) {
    const int n = static_cast<int>(net.intersections.size());
    partition.validate(n);
    nn::Matrix a(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (partition.assignment[i] != partition.assignment[j]) continue;
            const auto& xi = net.intersections[i];
            const auto& xj = net.intersections[j];
            const int dist = std::abs(xi.row - xj.row) + std::abs(xi.col - xj.col);
            if (dist == 1) {
                a(i, j) = 1.0;
                a(j, i) = 1.0;
            }
        }
    }
    return a;
}

nn::Matrix build_features(const sim::RoadNetwork& net, const FeatureLayout& layout) {
    const int n = static_cast<int>(net.intersections.size());
    nn::Matrix x(n, FeatureLayout::feature_dim);
    for (int node = 0; node < n; ++node) {
        for (int slot = 0; slot < sim::kLaneSlots; ++slot) {
            const sim::LaneRef ref = sim::approach_lane_slot(net, node, slot);
            if (ref.link < 0) continue;
            const sim::Lane& lane = net.lane(ref);
            const double wait = sim::observe_wait(lane, net.clock_s) / layout.wait_scale_s;
            const double wave = sim::observe_wave(lane) / layout.wave_scale_veh;
            x(node, 2 * slot) = std::clamp(wait, 0.0, 1.0);
            x(node, 2 * slot + 1) = std::clamp(wave, 0.0, 1.0);
        }
    }
    return x;
}

FogPartition fully_observable_partition(const sim::RoadNetwork& net) {
    FogPartition p;
    p.assignment.assign(net.intersections.size(), 0);
    p.fog_count = 1;
    return p;
}

FogPartition two_fog_rows_partition(const sim::RoadNetwork& net) {
    if (net.rows != 2)
        throw ConfigError("two_fog preset requires a 2-row grid, network has " +
                          std::to_string(net.rows) + " rows");
    FogPartition p;
    p.assignment.resize(net.intersections.size());
    for (const auto& x : net.intersections) p.assignment[x.id] = x.row;
    p.fog_count = 2;
    return p;
}

PresetPartitions preset_partitions(const sim::RoadNetwork& net) {
    return PresetPartitions{fully_observable_partition(net), two_fog_rows_partition(net)};
}

std::vector<double> per_node_reward(const sim::RoadNetwork& net, double sigma1, double sigma2,
                                    const FeatureLayout& layout, double reward_scale) {
    if (sigma1 < 0.0 || sigma2 < 0.0)
        throw ConfigError("reward weights sigma1/sigma2 must be >= 0");
    if (!(reward_scale > 0.0)) throw ConfigError("reward_scale must be > 0");
    (void)layout;  // slot order is the layout's fixed order
    const int n = static_cast<int>(net.intersections.size());
    std::vector<double> r(n, 0.0);
    for (int node = 0; node < n; ++node) {
        double penalty = 0.0;
        for (int slot = 0; slot < sim::kLaneSlots; ++slot) {
            const sim::LaneRef ref = sim::approach_lane_slot(net, node, slot);
            if (ref.link < 0) continue;
            const sim::Lane& lane = net.lane(ref);
            penalty += sigma1 * sim::observe_wait(lane, net.clock_s) +
                       sigma2 * sim::observe_wave(lane);
        }
        r[node] = -penalty / reward_scale;
    }
    return r;
}

GraphObservation observe(const sim::RoadNetwork& net, const FogPartition& partition,
                         const FeatureLayout& layout) {
    return GraphObservation{build_features(net, layout), build_adjacency(net, partition)};
}

}  // namespace foggrid::graph
