#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "foggrid/rng.hpp"

namespace foggrid::sim {

/// Side of an intersection an approach attaches to; traffic on the West
/// approach travels eastbound, and so on.
enum class Side : int { East = 0, West = 1, North = 2, South = 3 };
constexpr std::array<Side, 4> kSides{Side::East, Side::West, Side::North, Side::South};

enum class Movement : int { Through = 0, Left = 1, Right = 2 };

enum class LaneKind : int { Through = 0, Left = 1, Shared = 2 };

/// The five signal phases. EW_THROUGH greens the East and West through lanes
/// (right turns ride along), EW_LEFT both left-turn lanes, E_ALL / W_ALL every
/// movement of that single approach, NS_ALL both shared North/South lanes.
enum class SignalPhase : int {
    EW_THROUGH = 0,
    EW_LEFT = 1,
    E_ALL = 2,
    W_ALL = 3,
    NS_ALL = 4,
};
constexpr int kPhaseCount = 5;

bool lane_is_green(SignalPhase phase, Side approach, LaneKind kind);
const char* phase_name(SignalPhase phase);

struct TurnProbabilities {
    double through = 0.70;
    double left = 0.15;
    double right = 0.15;
};

struct SimConfig {
    double decision_interval_s = 5.0;      // control step length
    double arrival_rate_veh_h = 2200.0;    // per entry segment
    double saturation_headway_s = 2.0;
    double link_traversal_time_s = 30.0;
    int lane_capacity = 40;
    double lost_time_s = 0.0;              // deducted from green after a phase switch
    TurnProbabilities turn;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

struct Vehicle {
    long id = 0;
    double injection_time_s = 0.0;
    Movement movement = Movement::Through;  // movement at the next intersection
    double queue_join_time_s = 0.0;         // valid while queued
    double accumulated_delay_s = 0.0;
};

struct InTransit {
    Vehicle vehicle;
    double arrive_time_s = 0.0;  // when it reaches the back of the queue
};

struct Lane {
    LaneKind kind = LaneKind::Shared;
    int capacity = 0;
    std::deque<Vehicle> queue;
    std::deque<InTransit> in_transit;
    double discharge_carry = 0.0;

    int queued() const { return static_cast<int>(queue.size()); }
    int approaching() const { return static_cast<int>(queue.size() + in_transit.size()); }
    bool full() const { return approaching() >= capacity; }
};

/// Directed road segment. `to == -1` marks an exit to the outside (no lanes);
/// `from == -1` marks an entry segment fed by Poisson arrivals.
struct Link {
    int from = -1;
    int to = -1;
    Side entry_side = Side::East;  // side of `to` this link enters
    bool horizontal = false;       // East/West oriented links carry 2 lanes
    std::vector<Lane> lanes;

    bool is_entry() const { return from < 0 && to >= 0; }
    bool is_exit() const { return to < 0; }
};

struct Intersection {
    int id = 0;
    int row = 0;
    int col = 0;
    std::array<int, 4> approach{-1, -1, -1, -1};  // incoming link per Side
    std::array<int, 4> outgoing{-1, -1, -1, -1};  // outgoing link per Side
};

/// Identifies one lane: lane `lane` of links[link].
struct LaneRef {
    int link = -1;
    int lane = -1;
};

struct RoadNetwork {
    int rows = 0;
    int cols = 0;
    SimConfig config;
    std::vector<Intersection> intersections;
    std::vector<Link> links;
    std::vector<int> entry_links;
    std::vector<int> exit_links;
    std::vector<SignalPhase> prev_phases;  // empty before the first step

    double clock_s = 0.0;
    long next_vehicle_id = 0;
    long long cum_injected = 0;
    long long cum_rejected = 0;
    long long cum_departed = 0;
    Rng rng{0};

    Lane& lane(LaneRef ref) { return links[ref.link].lanes[ref.lane]; }
    const Lane& lane(LaneRef ref) const { return links[ref.link].lanes[ref.lane]; }
    long long vehicles_in_network() const;
};

/// Fixed per-intersection lane slot order used by observations: E-through,
/// E-left, W-through, W-left, N-shared, S-shared.
constexpr int kLaneSlots = 6;

/// Lane behind slot `slot` (0..5) of intersection `node`; {-1,-1} if absent.
LaneRef approach_lane_slot(const RoadNetwork& net, int node, int slot);

struct StepMetrics {
    double time_s = 0.0;
    long injected = 0;
    long rejected = 0;
    long departed = 0;
    long long in_network = 0;
    long long cum_injected = 0;
    long long cum_rejected = 0;
    long long cum_departed = 0;
    std::vector<double> intersection_delay_s;  // summed queue delay per intersection
    double avg_intersection_delay_s = 0.0;
    std::vector<double> lane_wait_s;  // per lane, global (link, lane) order
    std::vector<int> lane_wave;
};

/// Builds the rows x cols signalized grid. Node 0 is the top-left
/// intersection; numbering is row-major. East/West approaches carry a through
/// and a left-turn lane, North/South a single shared lane.
RoadNetwork build_grid(int rows, int cols, const SimConfig& config);

/// Advances the network by one decision interval under the given phases,
/// using the supplied random source for arrivals and turn choices.
StepMetrics step(RoadNetwork& net, const std::vector<SignalPhase>& phases, Rng& rng);

/// Convenience overload using the network-owned random source.
StepMetrics step(RoadNetwork& net, const std::vector<SignalPhase>& phases);

/// Waiting time of the head vehicle (now - queue join time); 0 when empty.
double observe_wait(const Lane& lane, double now_s);
double observe_wait(const RoadNetwork& net, LaneRef ref);

/// Queued plus in-transit vehicle count.
int observe_wave(const Lane& lane);
int observe_wave(const RoadNetwork& net, LaneRef ref);

/// Mean over intersections of per-vehicle current waiting time (intersections
/// with no queued vehicles contribute 0).
double average_intersection_delay(const RoadNetwork& net);

/// Clears all traffic, resets the clock and counters, reseeds the rng.
void reset(RoadNetwork& net, std::uint64_t seed);

}  // namespace foggrid::sim
