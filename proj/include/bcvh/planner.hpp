#pragma once

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bcvh/world.hpp"

namespace bcvh {

// Distinguished graph node for the navigation target.
inline constexpr const char* kGoalNode = "GOAL";

// Robots as nodes, shared landmarks as edges, plus GOAL attached to every
// robot whose view contains the goal landmark.
struct VisibilityGraph {
    std::vector<std::string> robots;  // sorted
    std::map<std::pair<std::string, std::string>, std::set<LandmarkId>> shared;
    std::set<std::string> sees_goal;
    LandmarkId goal_landmark;

    const std::set<LandmarkId>* shared_between(const std::string& a,
                                               const std::string& b) const {
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = shared.find(key);
        return it == shared.end() ? nullptr : &it->second;
    }

    // Robot neighbours of `r`, in id order.
    std::vector<std::string> neighbors(const std::string& r) const {
        std::vector<std::string> out;
        for (const auto& other : robots) {
            if (other != r && shared_between(r, other) != nullptr) out.push_back(other);
        }
        return out;
    }

    // Edge list including GOAL edges, for reporting.
    std::vector<std::pair<std::string, std::string>> edge_list() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [key, ids] : shared) out.push_back(key);
        for (const auto& r : sees_goal) out.emplace_back(r, kGoalNode);
        return out;
    }
};

inline VisibilityGraph build_visibility_graph(
    const std::map<std::string, PanoramicView>& latest_views,
    const LandmarkId& goal_landmark) {
    VisibilityGraph g;
    g.goal_landmark = goal_landmark;
    for (const auto& [robot, view] : latest_views) {
        g.robots.push_back(robot);
        if (view.contains(goal_landmark)) g.sees_goal.insert(robot);
    }
    for (size_t i = 0; i < g.robots.size(); ++i) {
        for (size_t j = i + 1; j < g.robots.size(); ++j) {
            auto ids = common_landmarks(latest_views.at(g.robots[i]),
                                        latest_views.at(g.robots[j]));
            if (!ids.empty()) g.shared[{g.robots[i], g.robots[j]}] = std::move(ids);
        }
    }
    return g;
}

// A planned route: robot chain requester..last-seer plus the landmark
// waypoint for each hop, always ending with the goal landmark itself.
// hops() counts waypoints traversed, the final goal hop included.
struct LandmarkChain {
    std::vector<LandmarkId> waypoints;
    std::vector<std::string> via_robots;

    size_t hops() const { return waypoints.size(); }

    bool operator==(const LandmarkChain&) const = default;
};

// Breadth-first shortest robot chain from the requester to GOAL. Among
// equal-length chains the lexicographically smallest robot-id sequence wins;
// each hop's waypoint is the lexicographically smallest shared landmark.
// FIFO expansion in sorted neighbour order visits candidate paths in
// lexicographic order per layer, so first arrival is the tie-break winner.
inline std::optional<LandmarkChain> plan_landmark_chain(const VisibilityGraph& graph,
                                                        const std::string& requester) {
    if (std::find(graph.robots.begin(), graph.robots.end(), requester) ==
        graph.robots.end())
        return std::nullopt;

    if (graph.sees_goal.count(requester)) {
        LandmarkChain chain;
        chain.via_robots = {requester};
        chain.waypoints = {graph.goal_landmark};
        return chain;
    }

    std::map<std::string, std::string> parent;  // child -> parent robot
    std::deque<std::string> frontier{requester};
    parent[requester] = requester;
    std::optional<std::string> last_seer;

    while (!frontier.empty() && !last_seer) {
        const std::string current = frontier.front();
        frontier.pop_front();
        for (const auto& next : graph.neighbors(current)) {
            if (parent.count(next)) continue;
            parent[next] = current;
            if (graph.sees_goal.count(next)) {
                last_seer = next;
                break;
            }
            frontier.push_back(next);
        }
    }
    if (!last_seer) return std::nullopt;

    LandmarkChain chain;
    for (std::string r = *last_seer; r != requester; r = parent.at(r))
        chain.via_robots.push_back(r);
    chain.via_robots.push_back(requester);
    std::reverse(chain.via_robots.begin(), chain.via_robots.end());

    for (size_t i = 0; i + 1 < chain.via_robots.size(); ++i) {
        const auto* ids =
            graph.shared_between(chain.via_robots[i], chain.via_robots[i + 1]);
        chain.waypoints.push_back(*ids->begin());
    }
    chain.waypoints.push_back(graph.goal_landmark);
    return chain;
}

// --- synthetic topologies for the path-length claims ------------------------

enum class TopologyKind { Tree, Chain, Random };

struct TopologySpec {
    TopologyKind kind = TopologyKind::Chain;
    size_t robot_count = 1;
    size_t branching = 2;    // Tree
    double density = 0.3;    // Random: edge probability
    uint64_t seed = 0;       // Random
};

struct ChainLengthStats {
    std::map<std::string, size_t> hops_per_requester;  // reachable only
    size_t max_hops = 0;
    double mean_hops = 0;
    double unreachable_fraction = 0;
};

namespace detail {

inline std::string topo_robot_name(size_t i) {
    // zero-padded so lexicographic order matches numeric order
    std::string digits = std::to_string(i);
    return "T" + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

inline LandmarkId topo_edge_landmark(size_t a, size_t b) {
    if (a > b) std::swap(a, b);
    return "E" + std::to_string(a) + "_" + std::to_string(b);
}

inline void give_landmark(std::map<std::string, PanoramicView>& views,
                          const std::string& robot, const LandmarkId& id) {
    // FNV-1a keeps sector placement platform-independent.
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : id) h = (h ^ c) * 1099511628211ull;
    views[robot].sectors[h % kSectorCount].insert(id);
}

}  // namespace detail

// Builds the requested synthetic visibility world as latest-view maps:
//  - Tree: complete b-ary tree, parent and child share one landmark; the
//    goal landmark sits on the deepest-last leaf edge (n = 1: the sole
//    robot sees the goal directly).
//  - Chain: a line of robots, each sharing one landmark with the next; the
//    goal landmark sits on the last edge.
//  - Random: each pair shares a landmark with probability `density`; the
//    goal landmark is seen by the last robot only.
inline std::pair<std::map<std::string, PanoramicView>, LandmarkId>
build_topology_views(const TopologySpec& spec) {
    using detail::give_landmark;
    using detail::topo_edge_landmark;
    using detail::topo_robot_name;

    std::map<std::string, PanoramicView> views;
    const size_t n = spec.robot_count;
    for (size_t i = 0; i < n; ++i) views[topo_robot_name(i)];

    LandmarkId goal = "GOAL_LANDMARK";
    if (n == 1) {
        give_landmark(views, topo_robot_name(0), goal);
        return {views, goal};
    }

    switch (spec.kind) {
        case TopologyKind::Tree: {
            for (size_t child = 1; child < n; ++child) {
                size_t parent = (child - 1) / spec.branching;
                auto lm = topo_edge_landmark(parent, child);
                give_landmark(views, topo_robot_name(parent), lm);
                give_landmark(views, topo_robot_name(child), lm);
            }
            goal = topo_edge_landmark((n - 2) / spec.branching, n - 1);
            break;
        }
        case TopologyKind::Chain: {
            for (size_t i = 0; i + 1 < n; ++i) {
                auto lm = topo_edge_landmark(i, i + 1);
                give_landmark(views, topo_robot_name(i), lm);
                give_landmark(views, topo_robot_name(i + 1), lm);
            }
            goal = topo_edge_landmark(n - 2, n - 1);
            break;
        }
        case TopologyKind::Random: {
            std::mt19937_64 rng(spec.seed);
            auto unit = [&rng]() {
                return static_cast<double>(rng() >> 11) * 0x1.0p-53;
            };
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = i + 1; j < n; ++j) {
                    if (unit() < spec.density) {
                        auto lm = topo_edge_landmark(i, j);
                        give_landmark(views, topo_robot_name(i), lm);
                        give_landmark(views, topo_robot_name(j), lm);
                    }
                }
            }
            give_landmark(views, topo_robot_name(n - 1), goal);
            break;
        }
    }
    return {views, goal};
}

// Planner hop counts over every requester of a synthetic topology.
inline ChainLengthStats chain_length_stats(const TopologySpec& spec) {
    auto [views, goal] = build_topology_views(spec);
    auto graph = build_visibility_graph(views, goal);

    ChainLengthStats stats;
    size_t unreachable = 0;
    size_t total = 0;
    for (const auto& [robot, view] : views) {
        auto chain = plan_landmark_chain(graph, robot);
        if (!chain) {
            ++unreachable;
            continue;
        }
        stats.hops_per_requester[robot] = chain->hops();
        stats.max_hops = std::max(stats.max_hops, chain->hops());
        total += chain->hops();
    }
    if (!stats.hops_per_requester.empty())
        stats.mean_hops = static_cast<double>(total) /
                          static_cast<double>(stats.hops_per_requester.size());
    stats.unreachable_fraction =
        static_cast<double>(unreachable) / static_cast<double>(views.size());
    return stats;
}

}  // namespace bcvh
