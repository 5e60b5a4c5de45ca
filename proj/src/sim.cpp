#include "foggrid/sim.hpp"

#include <cmath>

#include "foggrid/errors.hpp"

namespace foggrid::sim {

namespace {

constexpr int kThroughLane = 0;
constexpr int kLeftLane = 1;

int side_index(Side s) { return static_cast<int>(s); }

/// Side of the intersection a vehicle leaves through, given the side it
/// arrived at and its movement.
Side exit_side(Side approach, Movement m) {
    switch (approach) {
        case Side::West:   // heading east
            return m == Movement::Through ? Side::East
                 : m == Movement::Left    ? Side::North
                                          : Side::South;
        case Side::East:   // heading west
            return m == Movement::Through ? Side::West
                 : m == Movement::Left    ? Side::South
                                          : Side::North;
        case Side::North:  // heading south
            return m == Movement::Through ? Side::South
                 : m == Movement::Left    ? Side::East
                                          : Side::West;
        case Side::South:  // heading north
            return m == Movement::Through ? Side::North
                 : m == Movement::Left    ? Side::West
                                          : Side::East;
    }
    return Side::East;  // unreachable
}

Movement sample_movement(Rng& rng, const TurnProbabilities& p) {
    const double u = rng.uniform01();
    if (u < p.through) return Movement::Through;
    if (u < p.through + p.left) return Movement::Left;
    return Movement::Right;
}

int lane_index_for_movement(const Link& link, Movement m) {
    if (!link.horizontal) return 0;
    return m == Movement::Left ? kLeftLane : kThroughLane;
}

void make_lanes(Link& link, const SimConfig& cfg) {
    if (link.is_exit()) return;
    if (link.horizontal) {
        link.lanes.resize(2);
        link.lanes[kThroughLane].kind = LaneKind::Through;
        link.lanes[kLeftLane].kind = LaneKind::Left;
    } else {
        link.lanes.resize(1);
        link.lanes[0].kind = LaneKind::Shared;
    }
    for (Lane& ln : link.lanes) ln.capacity = cfg.lane_capacity;
}

}  // namespace

bool lane_is_green(SignalPhase phase, Side approach, LaneKind kind) {
    const bool ew = approach == Side::East || approach == Side::West;
    switch (phase) {
        case SignalPhase::EW_THROUGH: return ew && kind == LaneKind::Through;
        case SignalPhase::EW_LEFT:    return ew && kind == LaneKind::Left;
        case SignalPhase::E_ALL:      return approach == Side::East;
        case SignalPhase::W_ALL:      return approach == Side::West;
        case SignalPhase::NS_ALL:     return approach == Side::North || approach == Side::South;
    }
    return false;
}

const char* phase_name(SignalPhase phase) {
    switch (phase) {
        case SignalPhase::EW_THROUGH: return "EW_THROUGH";
        case SignalPhase::EW_LEFT:    return "EW_LEFT";
        case SignalPhase::E_ALL:      return "E_ALL";
        case SignalPhase::W_ALL:      return "W_ALL";
        case SignalPhase::NS_ALL:     return "NS_ALL";
    }
    return "?";
}

void SimConfig::validate() const {
    if (!(decision_interval_s > 0.0))
        throw ConfigError("sim.decision_interval_s must be > 0");
    if (arrival_rate_veh_h < 0.0)
        throw ConfigError("sim.arrival_rate_veh_per_hour must be >= 0");
    if (!(saturation_headway_s > 0.0))
        throw ConfigError("sim.saturation_headway_s must be > 0");
    if (link_traversal_time_s < 0.0)
        throw ConfigError("sim.link_traversal_time_s must be >= 0");
    if (lane_capacity < 1) throw ConfigError("sim.lane_capacity must be >= 1");
    if (lost_time_s < 0.0 || lost_time_s > decision_interval_s)
        throw ConfigError("sim.lost_time_s must lie in [0, decision_interval_s]");
    const double psum = turn.through + turn.left + turn.right;
    if (turn.through < 0 || turn.left < 0 || turn.right < 0 || std::abs(psum - 1.0) > 1e-9)
        throw ConfigError("sim.turn_probabilities must be non-negative and sum to 1");
}

long long RoadNetwork::vehicles_in_network() const {
    long long n = 0;
    for (const Link& link : links)
        for (const Lane& lane : link.lanes) n += lane.approaching();
    return n;
}

LaneRef approach_lane_slot(const RoadNetwork& net, int node, int slot) {
    // Slots: E-through, E-left, W-through, W-left, N-shared, S-shared.
    static constexpr Side slot_side[kLaneSlots] = {Side::East, Side::East, Side::West,
                                                   Side::West, Side::North, Side::South};
    static constexpr int slot_lane[kLaneSlots] = {kThroughLane, kLeftLane, kThroughLane,
                                                  kLeftLane, 0, 0};
    const int link = net.intersections[node].approach[side_index(slot_side[slot])];
    if (link < 0) return LaneRef{-1, -1};
    if (slot_lane[slot] >= static_cast<int>(net.links[link].lanes.size())) return LaneRef{-1, -1};
    return LaneRef{link, slot_lane[slot]};
}

RoadNetwork build_grid(int rows, int cols, const SimConfig& config) {
    if (rows < 1 || cols < 1)
        throw ConfigError("network.rows and network.cols must be >= 1");
    config.validate();

    RoadNetwork net;
    net.rows = rows;
    net.cols = cols;
    net.config = config;
    net.rng = Rng(config.seed);

    const int n = rows * cols;
    net.intersections.resize(n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Intersection& x = net.intersections[r * cols + c];
            x.id = r * cols + c;
            x.row = r;
            x.col = c;
        }
    }

    auto neighbor = [&](int node, Side s) -> int {
        const Intersection& x = net.intersections[node];
        switch (s) {
            case Side::East:  return x.col + 1 < cols ? node + 1 : -1;
            case Side::West:  return x.col > 0 ? node - 1 : -1;
            case Side::North: return x.row > 0 ? node - cols : -1;
            case Side::South: return x.row + 1 < rows ? node + cols : -1;
        }
        return -1;
    };

    // Incoming approach links, one per side per intersection.
    for (int node = 0; node < n; ++node) {
        for (Side s : kSides) {
            Link link;
            link.from = neighbor(node, s);
            link.to = node;
            link.entry_side = s;
            link.horizontal = (s == Side::East || s == Side::West);
            make_lanes(link, config);
            const int idx = static_cast<int>(net.links.size());
            net.links.push_back(std::move(link));
            net.intersections[node].approach[side_index(s)] = idx;
            if (net.links[idx].is_entry()) net.entry_links.push_back(idx);
        }
    }

    // Outgoing table: interior sides point at the neighbor's opposite
    // approach, boundary sides at fresh exit links.
    auto opposite = [](Side s) {
        switch (s) {
            case Side::East:  return Side::West;
            case Side::West:  return Side::East;
            case Side::North: return Side::South;
            case Side::South: return Side::North;
        }
        return Side::East;
    };
    for (int node = 0; node < n; ++node) {
        for (Side s : kSides) {
            const int nb = neighbor(node, s);
            if (nb >= 0) {
                net.intersections[node].outgoing[side_index(s)] =
                    net.intersections[nb].approach[side_index(opposite(s))];
            } else {
                Link link;
                link.from = node;
                link.to = -1;
                link.horizontal = (s == Side::East || s == Side::West);
                const int idx = static_cast<int>(net.links.size());
                net.links.push_back(std::move(link));
                net.intersections[node].outgoing[side_index(s)] = idx;
                net.exit_links.push_back(idx);
            }
        }
    }
    return net;
}

StepMetrics step(RoadNetwork& net, const std::vector<SignalPhase>& phases) {
    return step(net, phases, net.rng);
}

StepMetrics step(RoadNetwork& net, const std::vector<SignalPhase>& phases, Rng& rng) {
    const int n = static_cast<int>(net.intersections.size());
    if (static_cast<int>(phases.size()) != n)
        throw ShapeError("step: " + std::to_string(phases.size()) + " phases for " +
                         std::to_string(n) + " intersections");

    const SimConfig& cfg = net.config;
    const double dt = cfg.decision_interval_s;
    net.clock_s += dt;
    const double now = net.clock_s;

    StepMetrics m;
    m.time_s = now;

    // (1) Poisson arrivals at entry segments.
    const double mean_arrivals = cfg.arrival_rate_veh_h * dt / 3600.0;
    for (int link_idx : net.entry_links) {
        Link& link = net.links[link_idx];
        const int k = rng.poisson(mean_arrivals);
        for (int i = 0; i < k; ++i) {
            const Movement mv = sample_movement(rng, cfg.turn);
            Lane& lane = link.lanes[lane_index_for_movement(link, mv)];
            if (lane.full()) {
                ++m.rejected;
                continue;
            }
            Vehicle v;
            v.id = net.next_vehicle_id++;
            v.injection_time_s = now;
            v.movement = mv;
            lane.in_transit.push_back(InTransit{v, now + cfg.link_traversal_time_s});
            ++m.injected;
        }
    }
    net.cum_injected += m.injected;
    net.cum_rejected += m.rejected;

    // (2) In-transit vehicles whose traversal elapsed join the queue.
    for (Link& link : net.links) {
        for (Lane& lane : link.lanes) {
            while (!lane.in_transit.empty() && lane.in_transit.front().arrive_time_s <= now) {
                Vehicle v = lane.in_transit.front().vehicle;
                lane.in_transit.pop_front();
                v.queue_join_time_s = now;
                lane.queue.push_back(v);
            }
        }
    }

    // (3) Signal-gated discharge.
    const bool have_prev = !net.prev_phases.empty();
    for (int node = 0; node < n; ++node) {
        const SignalPhase phase = phases[node];
        const bool switched = have_prev && net.prev_phases[node] != phase;
        const double green = switched ? std::max(0.0, dt - cfg.lost_time_s) : dt;
        for (int slot = 0; slot < kLaneSlots; ++slot) {
            const LaneRef ref = approach_lane_slot(net, node, slot);
            if (ref.link < 0) continue;
            Lane& lane = net.lane(ref);
            const Side side = net.links[ref.link].entry_side;
            if (!lane_is_green(phase, side, lane.kind)) {
                lane.discharge_carry = 0.0;
                continue;
            }
            const double budget = green / cfg.saturation_headway_s + lane.discharge_carry;
            const int max_departures = static_cast<int>(std::floor(budget));
            int sent = 0;
            bool blocked = false;
            while (sent < max_departures && !lane.queue.empty()) {
                Vehicle& head = lane.queue.front();
                const Side out_side = exit_side(side, head.movement);
                const int out_idx = net.intersections[node].outgoing[side_index(out_side)];
                Link& out = net.links[out_idx];
                if (out.is_exit()) {
                    lane.queue.pop_front();
                    ++m.departed;
                } else {
                    const Movement next_mv = sample_movement(rng, cfg.turn);
                    Lane& receiving = out.lanes[lane_index_for_movement(out, next_mv)];
                    if (receiving.full()) {
                        blocked = true;
                        break;
                    }
                    Vehicle v = head;
                    lane.queue.pop_front();
                    v.movement = next_mv;
                    receiving.in_transit.push_back(InTransit{v, now + cfg.link_traversal_time_s});
                }
                ++sent;
            }
            // Carry banks only the fractional remainder of a fully used
            // budget; a blocked or drained lane cannot store green time.
            if (blocked || lane.queue.empty())
                lane.discharge_carry = 0.0;
            else
                lane.discharge_carry = budget - max_departures;
        }
    }
    net.cum_departed += m.departed;
    net.prev_phases = phases;

    // (4) Queued vehicles accumulate delay.
    for (Link& link : net.links)
        for (Lane& lane : link.lanes)
            for (Vehicle& v : lane.queue) v.accumulated_delay_s += dt;

    // (5) Metrics.
    m.in_network = net.vehicles_in_network();
    m.cum_injected = net.cum_injected;
    m.cum_rejected = net.cum_rejected;
    m.cum_departed = net.cum_departed;
    m.intersection_delay_s.assign(n, 0.0);
    for (int node = 0; node < n; ++node) {
        for (int slot = 0; slot < kLaneSlots; ++slot) {
            const LaneRef ref = approach_lane_slot(net, node, slot);
            if (ref.link < 0) continue;
            for (const Vehicle& v : net.lane(ref).queue)
                m.intersection_delay_s[node] += now - v.queue_join_time_s;
        }
    }
    m.avg_intersection_delay_s = average_intersection_delay(net);
    for (const Link& link : net.links) {
        for (const Lane& lane : link.lanes) {
            m.lane_wait_s.push_back(observe_wait(lane, now));
            m.lane_wave.push_back(observe_wave(lane));
        }
    }
    return m;
}

double observe_wait(const Lane& lane, double now_s) {
    if (lane.queue.empty()) return 0.0;
    return now_s - lane.queue.front().queue_join_time_s;
}

double observe_wait(const RoadNetwork& net, LaneRef ref) {
    return observe_wait(net.lane(ref), net.clock_s);
}

int observe_wave(const Lane& lane) { return lane.approaching(); }

int observe_wave(const RoadNetwork& net, LaneRef ref) { return observe_wave(net.lane(ref)); }

double average_intersection_delay(const RoadNetwork& net) {
    const int n = static_cast<int>(net.intersections.size());
    if (n == 0) return 0.0;
    double total = 0.0;
    for (int node = 0; node < n; ++node) {
        double delay = 0.0;
        long count = 0;
        for (int slot = 0; slot < kLaneSlots; ++slot) {
            const LaneRef ref = approach_lane_slot(net, node, slot);
            if (ref.link < 0) continue;
            const Lane& lane = net.lane(ref);
            for (const Vehicle& v : lane.queue) delay += net.clock_s - v.queue_join_time_s;
            count += lane.queued();
        }
        if (count > 0) total += delay / static_cast<double>(count);
    }
    return total / static_cast<double>(n);
}

void reset(RoadNetwork& net, std::uint64_t seed) {
    for (Link& link : net.links) {
        for (Lane& lane : link.lanes) {
            lane.queue.clear();
            lane.in_transit.clear();
            lane.discharge_carry = 0.0;
        }
    }
    net.prev_phases.clear();
    net.clock_s = 0.0;
    net.next_vehicle_id = 0;
    net.cum_injected = 0;
    net.cum_rejected = 0;
    net.cum_departed = 0;
    net.rng = Rng(seed);
}

}  // namespace foggrid::sim
