#pragma once

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bcvh/consensus.hpp"
#include "bcvh/planner.hpp"
#include "bcvh/world.hpp"

namespace bcvh {

// --- scenario configuration --------------------------------------------------

struct RobotSpec {
    std::string id;
    Pose start;
    double speed_mps = 0;
    uint64_t sense_period_us = 1'000'000;
    std::vector<Point> patrol;  // optional scripted walk for non-requesters
};

struct PartitionWindow {
    uint64_t start_us = 0;
    uint64_t end_us = 0;
    std::vector<std::set<std::string>> groups;  // unlisted nodes form one extra group
};

struct TransportSpec {
    uint64_t latency_min_us = 0;
    uint64_t latency_max_us = 0;
    double drop_probability = 0;
    std::vector<PartitionWindow> partitions;
};

enum class AdversaryKind { Tamper, Spoof, Replay, Flood, WithholdVotes, ForkMiner };

inline const char* adversary_kind_name(AdversaryKind k) {
    switch (k) {
        case AdversaryKind::Tamper: return "tamper";
        case AdversaryKind::Spoof: return "spoof";
        case AdversaryKind::Replay: return "replay";
        case AdversaryKind::Flood: return "flood";
        case AdversaryKind::WithholdVotes: return "withhold_votes";
        case AdversaryKind::ForkMiner: return "fork_miner";
    }
    return "?";
}

struct AdversarySpec {
    std::string node_id;
    AdversaryKind kind = AdversaryKind::Tamper;
    uint64_t start_us = 0;
    // Spoof: "fabricated-id" | "wrong-key" | "observer-role".
    std::string mode;
    uint64_t period_us = 500'000;   // action cadence for periodic behaviors
    uint32_t fork_depth = 3;        // ForkMiner: private blocks before publishing
    uint32_t flood_multiplier = 100;
};

struct MissionSpec {
    std::string requester;
    bool blockchain_enabled = true;
    bool compare = false;           // run_scenario vs. baseline comparison
    double overhead_threshold = 0.05;
    uint32_t replications = 2;
};

struct ScenarioConfig {
    std::string name = "scenario";
    uint64_t seed = 0;
    World world;
    std::vector<RobotSpec> robots;
    std::vector<std::string> observers;  // ACL observer nodes (no robot body)
    ConsensusParams consensus;
    TransportSpec transport;
    std::vector<AdversarySpec> adversaries;
    MissionSpec mission;
    uint64_t duration_us = 120'000'000;
    uint64_t patience_us = 20'000'000;
};

// Identity seeds are derived from robot ids alone so the same ACL backs every
// replication and mode of a scenario.
inline PrivateSeed identity_seed(const std::string& robot_id) {
    Bytes material;
    append_tag(material, "bcvh-identity:");
    append_raw(material, std::span<const uint8_t>(
                             reinterpret_cast<const uint8_t*>(robot_id.data()),
                             robot_id.size()));
    Digest d = sha512(material);
    PrivateSeed seed{};
    std::copy_n(d.begin(), seed.size(), seed.begin());
    return seed;
}

inline Acl scenario_acl(const ScenarioConfig& cfg) {
    Acl acl;
    for (const auto& r : cfg.robots)
        acl.entries[r.id] = {ed25519_public_from_seed(identity_seed(r.id)),
                             Role::Member};
    for (const auto& o : cfg.observers)
        acl.entries[o] = {ed25519_public_from_seed(identity_seed(o)),
                          Role::Observer};
    return acl;
}

// --- trace and metrics -------------------------------------------------------

struct TraceEvent {
    uint64_t time_us = 0;
    std::string node;
    std::string event;
    std::string detail;
};

struct MetricsRecord {
    bool mission_success = false;
    uint64_t mission_time_us = 0;
    size_t hops = 0;       // waypoints traversed, goal included
    double distance_m = 0;
    uint64_t blocks_committed = 0;
    uint64_t msgs_sent = 0;
    std::vector<uint64_t> convergence_us;  // submit -> committed everywhere
    uint64_t update_wall_ns_median = 0;
    uint64_t retrieval_wall_ns_median = 0;
    uint64_t ledger_bytes = 0;
    uint64_t validations = 0;

    double mean_convergence_us() const {
        if (convergence_us.empty()) return 0;
        double sum = 0;
        for (auto v : convergence_us) sum += static_cast<double>(v);
        return sum / static_cast<double>(convergence_us.size());
    }
};

struct SimResult {
    MetricsRecord metrics;
    std::vector<TraceEvent> trace;
    std::map<std::string, LedgerState> final_ledgers;   // per consensus node
    std::map<std::string, std::vector<DeliveryReceipt>> audit_logs;
    std::optional<LandmarkChain> initial_plan;
    std::vector<std::pair<std::string, std::string>> initial_graph_edges;
    std::vector<LandmarkChain> plan_history;
    std::vector<LandmarkId> traversed_waypoints;
    std::set<std::string> honest_nodes;  // members not under adversary control
    // Digests of adversary-crafted submissions, for post-run audits.
    std::set<std::string> spoofed_tx_digests;
    std::set<std::string> replayed_tx_digests;
    std::set<std::string> flood_tx_digests;
    uint64_t first_commit_us = 0;
    uint64_t last_commit_us = 0;
};

inline uint64_t chain_bytes(const LedgerState& state) {
    uint64_t total = 0;
    for (const auto& b : state.blocks) {
        total += header_bytes(b.header).size();
        for (const auto& tx : b.txs)
            total += canonical_tx_bytes(tx, WithSignature::Yes).size();
    }
    return total;
}

namespace detail {

inline std::string format_meters(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// mt19937_64 driven helpers with implementation-independent mapping.
class DetRng {
  public:
    explicit DetRng(uint64_t seed) : eng_(seed) {}

    uint64_t u64() { return eng_(); }

    uint64_t range(uint64_t lo, uint64_t hi) {  // inclusive bounds
        if (hi <= lo) return lo;
        return lo + u64() % (hi - lo + 1);
    }

    double unit() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 eng_;
};

}  // namespace detail

// --- the deterministic event loop ---------------------------------------------

class Simulation {
  public:
    explicit Simulation(ScenarioConfig cfg)
        : cfg_(std::move(cfg)), rng_(cfg_.seed), acl_(scenario_acl(cfg_)) {}

    SimResult run() {
        setup();
        while (!queue_.empty() && !ended_) {
            Scheduled ev = queue_.top();
            queue_.pop();
            now_ = ev.time_us;
            if (now_ > cfg_.duration_us) {
                end_mission(false, "duration reached");
                break;
            }
            std::visit([&](auto&& payload) { handle(payload); }, ev.payload);
        }
        if (!ended_) end_mission(false, "event queue drained");
        finalize();
        return std::move(result_);
    }

  private:
    // -- event kinds --
    struct Delivery {
        std::string to;
        ConsensusMessage msg;
    };
    struct SenseTick {
        std::string robot;
    };
    struct ProposeTick {
        std::string node;
    };
    struct TimeoutProbe {
        std::string node;
        uint64_t round = 0;
    };
    struct MoveTick {};
    struct AdversaryTick {
        size_t index = 0;
    };
    struct PollReply {
        std::string robot;
        uint64_t request_id = 0;
    };
    using EventPayload = std::variant<Delivery, SenseTick, ProposeTick, TimeoutProbe,
                                      MoveTick, AdversaryTick, PollReply>;

    struct Scheduled {
        uint64_t time_us = 0;
        uint64_t order = 0;  // insertion tie-break: total event order
        EventPayload payload;

        bool operator>(const Scheduled& other) const {
            return time_us != other.time_us ? time_us > other.time_us
                                            : order > other.order;
        }
    };

    struct RobotState {
        RobotSpec spec;
        Pose pose;
        uint64_t next_seq = 1;
        std::set<LandmarkId> last_published;
        bool published_once = false;
        size_t patrol_index = 0;
        RobotIdentity identity;
    };

    static constexpr uint64_t kMoveTickUs = 50'000;
    static constexpr double kCaptureRadius = 0.5;

    void setup() {
        for (const auto& spec : cfg_.robots) {
            RobotState rs;
            rs.spec = spec;
            rs.pose = spec.start;
            rs.identity = keygen(spec.id, identity_seed(spec.id));
            robots_.emplace(spec.id, std::move(rs));
        }
        std::set<std::string> adversary_ids;
        for (const auto& a : cfg_.adversaries) adversary_ids.insert(a.node_id);
        for (const auto& [id, entry] : acl_.entries) {
            if (entry.role == Role::Member && !adversary_ids.count(id))
                result_.honest_nodes.insert(id);
        }

        if (bc_enabled()) {
            for (const auto& [id, entry] : acl_.entries) {
                Role role = entry.role;
                nodes_.emplace(id, Node(keygen(id, identity_seed(id), role), acl_,
                                        cfg_.consensus));
            }
            for (const auto& [id, node] : nodes_) {
                if (acl_.is_member(id)) {
                    schedule(cfg_.consensus.block_interval_us, ProposeTick{id});
                    schedule(cfg_.consensus.round_timeout_us, TimeoutProbe{id, 0});
                }
            }
        }
        for (const auto& [id, rs] : robots_) schedule(0, SenseTick{id});
        for (size_t i = 0; i < cfg_.adversaries.size(); ++i)
            schedule(cfg_.adversaries[i].start_us, AdversaryTick{i});
        schedule(0, MoveTick{});
    }

    bool bc_enabled() const { return cfg_.mission.blockchain_enabled; }

    void schedule(uint64_t at_us, EventPayload payload) {
        queue_.push({at_us, order_++, std::move(payload)});
    }

    void trace(const std::string& node, const std::string& event,
               const std::string& detail) {
        result_.trace.push_back({now_, node, event, detail});
    }

    // -- transport --

    bool partitioned(const std::string& a, const std::string& b) const {
        for (const auto& w : cfg_.transport.partitions) {
            if (now_ < w.start_us || now_ >= w.end_us) continue;
            auto group_of = [&](const std::string& id) {
                for (size_t g = 0; g < w.groups.size(); ++g)
                    if (w.groups[g].count(id)) return g;
                return w.groups.size();  // implicit remainder group
            };
            if (group_of(a) != group_of(b)) return true;
        }
        return false;
    }

    void send(const std::string& from, const std::string& to, ConsensusMessage msg) {
        ++result_.metrics.msgs_sent;
        if (partitioned(from, to)) return;
        uint64_t latency = rng_.range(cfg_.transport.latency_min_us,
                                      cfg_.transport.latency_max_us);
        if (cfg_.transport.drop_probability > 0 &&
            rng_.unit() < cfg_.transport.drop_probability)
            return;
        schedule(now_ + latency, Delivery{to, std::move(msg)});
    }

    void broadcast(const std::string& from, const ConsensusMessage& msg) {
        for (const auto& [id, entry] : acl_.entries) {
            if (id != from) send(from, id, msg);
        }
    }

    bool withholding(const std::string& node_id) const {
        for (const auto& a : cfg_.adversaries) {
            if (a.node_id == node_id && a.kind == AdversaryKind::WithholdVotes &&
                now_ >= a.start_us)
                return true;
        }
        return false;
    }

    void route(const std::string& from, StepResult&& res) {
        for (const auto& note : res.notes) trace(from, note.event, note.detail);
        for (auto& out : res.out) {
            if (withholding(from) && (out.msg.kind == MsgKind::Vote ||
                                      out.msg.kind == MsgKind::Commit ||
                                      out.msg.kind == MsgKind::Propose)) {
                trace(from, "withheld", msg_kind_name(out.msg.kind));
                continue;
            }
            if (out.to) {
                send(from, *out.to, std::move(out.msg));
            } else {
                broadcast(from, out.msg);
            }
        }
    }

    // -- node stepping with commit detection --

    template <typename Fn>
    void with_node(const std::string& id, Fn&& fn) {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) return;
        uint64_t before = it->second.ledger().height();
        StepResult res = fn(it->second);
        route(id, std::move(res));
        after_step(id, before);
    }

    void after_step(const std::string& id, uint64_t height_before) {
        Node& node = nodes_.at(id);
        uint64_t height_now = node.ledger().height();
        if (height_now == height_before) return;
        // Fork adoption can replace blocks wholesale, so rescan the chain;
        // emplace keeps the earliest commit time per (tx, node).
        bool views_changed = false;
        for (const auto& b : node.ledger().blocks) {
            for (const auto& tx : b.txs) {
                auto hex = to_hex(tx_digest(tx));
                if (commit_times_[hex].emplace(id, now_).second) views_changed = true;
            }
        }
        if (result_.honest_nodes.count(id)) {
            if (result_.first_commit_us == 0) result_.first_commit_us = now_;
            result_.last_commit_us = now_;
        }
        if (id == cfg_.mission.requester) {
            // heartbeat blocks carry no views and bring no planning progress
            if (views_changed) last_progress_us_ = now_;
            if (bc_enabled()) replan_from_ledger();
        }
    }

    // -- event handlers --

    void handle(const Delivery& ev) {
        auto it = nodes_.find(ev.to);
        if (it == nodes_.end()) return;
        uint64_t before = it->second.ledger().height();
        StepResult res = it->second.on_message(ev.msg, now_);
        route(ev.to, std::move(res));
        after_step(ev.to, before);
    }

    void handle(const SenseTick& ev) {
        auto& rs = robots_.at(ev.robot);
        PanoramicView view = compute_view(cfg_.world, rs.pose);
        auto flat = view.flattened();
        bool changed = !rs.published_once || flat != rs.last_published;
        // Initial empty views are not worth a transaction; later view losses
        // are real updates the team must learn about.
        bool worth = rs.published_once || !flat.empty();
        if (changed && worth && bc_enabled()) {
            FovTransaction tx;
            tx.robot_id = ev.robot;
            tx.seq = rs.next_seq++;
            tx.timestamp_us = now_;
            tx.view = view;
            tx = sign_tx(rs.identity, tx);
            submit_times_.emplace(to_hex(tx_digest(tx)), now_);
            trace(ev.robot, "publish", "seq=" + std::to_string(tx.seq) +
                                           " landmarks=" + std::to_string(flat.size()));
            with_node(ev.robot, [&](Node& n) { return n.submit_tx(tx, now_); });
            rs.last_published = flat;
            rs.published_once = true;
        } else if (changed && worth && !bc_enabled()) {
            rs.last_published = flat;
            rs.published_once = true;
        }
        if (!bc_enabled() && ev.robot == cfg_.mission.requester) start_poll_round();
        schedule(now_ + rs.spec.sense_period_us, SenseTick{ev.robot});
    }

    void handle(const ProposeTick& ev) {
        with_node(ev.node, [&](Node& n) { return n.on_propose_timer(now_); });
        schedule(now_ + cfg_.consensus.block_interval_us, ProposeTick{ev.node});
    }

    void handle(const TimeoutProbe& ev) {
        auto it = nodes_.find(ev.node);
        if (it == nodes_.end()) return;
        if (it->second.round() == ev.round) {
            with_node(ev.node,
                      [&](Node& n) { return n.on_round_timeout(ev.round, now_); });
        }
        schedule(now_ + cfg_.consensus.round_timeout_us,
                 TimeoutProbe{ev.node, it->second.round()});
    }

    void handle(const MoveTick&) {
        if (ended_) return;
        move_patrollers();
        move_requester();
        if (ended_) return;
        if (!current_plan_ && last_progress_us_ + cfg_.patience_us < now_) {
            end_mission(false, "no path within patience window");
            return;
        }
        schedule(now_ + kMoveTickUs, MoveTick{});
    }

    void handle(const AdversaryTick& ev) { run_adversary(ev.index); }

    void handle(const PollReply& ev) {
        if (ev.request_id != poll_request_id_) return;  // stale round
        auto& rs = robots_.at(ev.robot);
        poll_views_[ev.robot] = compute_view(cfg_.world, rs.pose);
        if (poll_views_.size() == robots_.size() - 1) complete_poll_round();
    }

    // -- baseline polling (blockchain disabled) --

    void start_poll_round() {
        poll_request_id_ += 1;
        poll_views_.clear();
        for (const auto& [id, rs] : robots_) {
            if (id == cfg_.mission.requester) continue;
            ++result_.metrics.msgs_sent;  // poll request
            uint64_t rtt = rng_.range(cfg_.transport.latency_min_us,
                                      cfg_.transport.latency_max_us) +
                           rng_.range(cfg_.transport.latency_min_us,
                                      cfg_.transport.latency_max_us);
            if (partitioned(cfg_.mission.requester, id)) continue;
            if (cfg_.transport.drop_probability > 0 &&
                rng_.unit() < cfg_.transport.drop_probability)
                continue;
            ++result_.metrics.msgs_sent;  // poll response
            schedule(now_ + rtt, PollReply{id, poll_request_id_});
        }
        if (robots_.size() == 1) complete_poll_round();
    }

    void complete_poll_round() {
        std::map<std::string, PanoramicView> views = poll_views_;
        replan(views, "poll");
        last_progress_us_ = now_;
    }

    // -- planning --

    void replan_from_ledger() {
        const auto& ledger = nodes_.at(cfg_.mission.requester).ledger();
        std::map<std::string, PanoramicView> views;
        for (const auto& [robot, lv] : ledger.latest_views) views[robot] = lv.view;
        replan(views, "ledger");
    }

    void replan(std::map<std::string, PanoramicView> views, const std::string& source) {
        auto& rs = robots_.at(cfg_.mission.requester);
        views[cfg_.mission.requester] = compute_view(cfg_.world, rs.pose);
        auto graph = build_visibility_graph(views, cfg_.world.goal_landmark);
        auto plan = plan_landmark_chain(graph, cfg_.mission.requester);

        if (!result_.initial_plan && plan) {
            result_.initial_plan = *plan;
            result_.initial_graph_edges = graph.edge_list();
        }
        if (!plan) {
            if (current_plan_) {
                trace(cfg_.mission.requester, "plan_lost", "source=" + source);
                current_plan_.reset();
                remaining_.clear();
            }
            return;
        }

        // An unchanged chain means keep walking the remaining route; the
        // planner re-deriving the same waypoints is not a new instruction.
        if (current_plan_ && plan->waypoints == current_plan_->waypoints &&
            plan->via_robots == current_plan_->via_robots)
            return;

        // On a genuinely new chain, skip leading waypoints the requester is
        // already standing on.
        std::deque<LandmarkId> route(plan->waypoints.begin(), plan->waypoints.end());
        while (route.size() > 1) {
            auto lit = cfg_.world.landmarks.find(route.front());
            if (lit == cfg_.world.landmarks.end()) break;
            if (distance(rs.pose.position(), lit->second) > kCaptureRadius) break;
            route.pop_front();
        }
        current_plan_ = *plan;
        remaining_ = std::move(route);
        result_.plan_history.push_back(*plan);
        std::string via;
        for (const auto& r : plan->via_robots) via += (via.empty() ? "" : ",") + r;
        std::string wps;
        for (const auto& w : plan->waypoints) wps += (wps.empty() ? "" : ",") + w;
        trace(cfg_.mission.requester, "plan",
              "source=" + source + " via=" + via + " waypoints=" + wps);
        last_progress_us_ = now_;
    }

    // -- motion --

    void move_patrollers() {
        for (auto& [id, rs] : robots_) {
            if (id == cfg_.mission.requester) continue;
            if (rs.spec.speed_mps <= 0 || rs.patrol_index >= rs.spec.patrol.size())
                continue;
            Point target = rs.spec.patrol[rs.patrol_index];
            if (step_towards(rs, target)) {
                rs.patrol_index += 1;
                trace(id, "patrol_point", "index=" + std::to_string(rs.patrol_index));
            }
        }
    }

    void move_requester() {
        auto& rs = robots_.at(cfg_.mission.requester);
        if (!current_plan_ || remaining_.empty() || rs.spec.speed_mps <= 0) return;
        auto lit = cfg_.world.landmarks.find(remaining_.front());
        if (lit == cfg_.world.landmarks.end()) {
            // waypoint id with no world position (possible only under attack)
            trace(cfg_.mission.requester, "plan_lost",
                  "waypoint " + remaining_.front() + " unknown");
            current_plan_.reset();
            remaining_.clear();
            return;
        }
        Point target = lit->second;
        double before_x = rs.pose.x, before_y = rs.pose.y;
        bool reached = step_towards(rs, target);
        result_.metrics.distance_m +=
            std::hypot(rs.pose.x - before_x, rs.pose.y - before_y);
        if (!reached) return;

        LandmarkId captured = remaining_.front();
        remaining_.pop_front();
        result_.traversed_waypoints.push_back(captured);
        result_.metrics.hops += 1;
        trace(cfg_.mission.requester, "waypoint_captured",
              captured + " at x=" + detail::format_meters(rs.pose.x) +
                  " y=" + detail::format_meters(rs.pose.y));
        if (captured == cfg_.world.goal_landmark) {
            end_mission(true, "goal captured");
        } else if (remaining_.empty()) {
            // route exhausted without the goal; wait for fresh views
            current_plan_.reset();
        }
    }

    // One motion step toward the target; true when within capture radius.
    bool step_towards(RobotState& rs, const Point& target) {
        double step = rs.spec.speed_mps * (static_cast<double>(kMoveTickUs) / 1e6);
        double dist = distance(rs.pose.position(), target);
        if (dist <= step) {
            rs.pose.x = target.x;
            rs.pose.y = target.y;
        } else if (dist > 0) {
            rs.pose.x += (target.x - rs.pose.x) / dist * step;
            rs.pose.y += (target.y - rs.pose.y) / dist * step;
        }
        return distance(rs.pose.position(), target) <= kCaptureRadius;
    }

    void end_mission(bool success, const std::string& why) {
        if (ended_) return;
        ended_ = true;
        result_.metrics.mission_success = success;
        result_.metrics.mission_time_us = now_;
        trace(cfg_.mission.requester, "mission_end",
              std::string(success ? "success" : "failure") + ": " + why);
    }

    // -- adversary behaviors --

    const AdversarySpec& adversary(size_t index) const {
        return cfg_.adversaries[index];
    }

    void run_adversary(size_t index) {
        const AdversarySpec& spec = adversary(index);
        if (!bc_enabled()) return;
        switch (spec.kind) {
            case AdversaryKind::Tamper: adversary_tamper(spec); break;
            case AdversaryKind::Spoof: adversary_spoof(spec); break;
            case AdversaryKind::Replay: adversary_replay(spec); break;
            case AdversaryKind::Flood: adversary_flood(spec); break;
            case AdversaryKind::WithholdVotes:
                trace(spec.node_id, "adversary", "withholding votes from now on");
                return;  // passive: the route() filter does the work
            case AdversaryKind::ForkMiner: adversary_fork_miner(index, spec); break;
        }
        if (spec.kind != AdversaryKind::ForkMiner)
            schedule(now_ + spec.period_us, AdversaryTick{index});
    }

    // Mutates a committed tx in its own chain copy and gossips the result.
    void adversary_tamper(const AdversarySpec& spec) {
        auto it = nodes_.find(spec.node_id);
        if (it == nodes_.end()) return;
        auto chain = it->second.ledger().blocks;
        uint64_t target = 0;
        for (size_t i = 1; i < chain.size(); ++i)
            if (!chain[i].txs.empty()) target = i;
        if (target == 0) return;
        auto& tx = chain[target].txs[0];
        tx.view.sectors[0].insert("TAMPERED_" + std::to_string(now_));
        trace(spec.node_id, "adversary",
              "gossiping tampered block " + std::to_string(target));
        ConsensusMessage msg{MsgKind::ChainResponse, spec.node_id, chain};
        broadcast(spec.node_id, msg);
    }

    void adversary_spoof(const AdversarySpec& spec) {
        FovTransaction tx;
        tx.seq = spoof_seq_++;
        tx.timestamp_us = now_;
        tx.view.sectors[0] = {"PHANTOM_" + std::to_string(tx.seq)};
        if (spec.mode == "wrong-key") {
            // claim an honest robot's id, sign with the adversary's key
            tx.robot_id = first_honest_member();
            tx.signature = ed25519_sign(identity_seed(spec.node_id),
                                        sha512(tx_signing_bytes(tx)));
        } else if (spec.mode == "observer-role") {
            // a registered observer submitting despite its read-only role
            tx.robot_id = spec.node_id;
            tx = sign_tx(keygen(spec.node_id, identity_seed(spec.node_id),
                                Role::Observer),
                         tx);
        } else {  // fabricated-id
            tx.robot_id = "GHOST";
            tx = sign_tx(keygen("GHOST", identity_seed("GHOST")), tx);
        }
        result_.spoofed_tx_digests.insert(to_hex(tx_digest(tx)));
        trace(spec.node_id, "adversary", "spoofed submit as " + tx.robot_id);
        broadcast(spec.node_id, {MsgKind::SubmitTx, spec.node_id, tx});
    }

    void adversary_replay(const AdversarySpec& spec) {
        auto it = nodes_.find(spec.node_id);
        if (it == nodes_.end()) return;
        const auto& blocks = it->second.ledger().blocks;
        for (const auto& b : blocks) {
            if (b.txs.empty()) continue;
            const auto& tx = b.txs[0];
            result_.replayed_tx_digests.insert(to_hex(tx_digest(tx)));
            trace(spec.node_id, "adversary",
                  "replaying " + tx.robot_id + " seq " + std::to_string(tx.seq));
            broadcast(spec.node_id, {MsgKind::SubmitTx, spec.node_id, tx});
            return;
        }
    }

    // Valid, well-signed spam at many times the sensing rate; rate limiting
    // has to keep honest traffic flowing.
    void adversary_flood(const AdversarySpec& spec) {
        auto rit = robots_.find(spec.node_id);
        if (rit == robots_.end()) return;
        auto& rs = rit->second;
        for (uint32_t i = 0; i < spec.flood_multiplier; ++i) {
            FovTransaction tx;
            tx.robot_id = spec.node_id;
            tx.seq = rs.next_seq++;
            tx.timestamp_us = now_;
            tx.view.sectors[i % kSectorCount] = {"FLOOD_" + spec.node_id + "_" + std::to_string(tx.seq)};
            tx = sign_tx(rs.identity, tx);
            auto hex = to_hex(tx_digest(tx));
            result_.flood_tx_digests.insert(hex);
            submit_times_.emplace(hex, now_);
            with_node(spec.node_id, [&](Node& n) { return n.submit_tx(tx, now_); });
        }
        trace(spec.node_id, "adversary",
              "flooded " + std::to_string(spec.flood_multiplier) + " txs");
    }

    // Mines a private branch from its current tip, then publishes it.
    void adversary_fork_miner(size_t index, const AdversarySpec& spec) {
        auto it = nodes_.find(spec.node_id);
        if (it == nodes_.end()) return;
        auto& priv = fork_chains_[index];
        if (priv.empty()) priv = it->second.ledger().blocks;
        if (priv.size() < it->second.ledger().blocks.size())
            priv = it->second.ledger().blocks;  // honest chain moved past us

        uint64_t mined = fork_mined_[index];
        if (mined < spec.fork_depth) {
            priv.push_back(mine_block(priv.back().header, {}, spec.node_id, now_,
                                      cfg_.consensus.difficulty));
            fork_mined_[index] = mined + 1;
            trace(spec.node_id, "adversary",
                  "private block at height " + std::to_string(priv.back().header.index));
            schedule(now_ + spec.period_us, AdversaryTick{index});
            return;
        }
        trace(spec.node_id, "adversary",
              "publishing private fork of height " +
                  std::to_string(priv.back().header.index));
        broadcast(spec.node_id, {MsgKind::ChainResponse, spec.node_id, priv});
        fork_mined_[index] = 0;
        priv.clear();
        schedule(now_ + spec.period_us * 4, AdversaryTick{index});
    }

    std::string first_honest_member() const {
        for (const auto& id : result_.honest_nodes) return id;
        return acl_.sorted_members().front();
    }

    // -- wrap-up --

    void finalize() {
        for (const auto& [id, node] : nodes_) {
            result_.final_ledgers.emplace(id, node.ledger());
            result_.audit_logs.emplace(id, node.audit_log());
            if (result_.honest_nodes.count(id))
                result_.metrics.validations += node.validations_performed();
        }
        if (bc_enabled()) {
            const auto& requester_ledger = nodes_.at(cfg_.mission.requester).ledger();
            result_.metrics.blocks_committed = requester_ledger.height();
            result_.metrics.ledger_bytes = chain_bytes(requester_ledger);
        }
        for (const auto& [digest, by_node] : commit_times_) {
            auto sit = submit_times_.find(digest);
            if (sit == submit_times_.end()) continue;
            uint64_t latest = 0;
            bool everywhere = true;
            for (const auto& honest : result_.honest_nodes) {
                auto nit = by_node.find(honest);
                if (nit == by_node.end()) {
                    everywhere = false;
                    break;
                }
                latest = std::max(latest, nit->second);
            }
            if (everywhere)
                result_.metrics.convergence_us.push_back(latest - sit->second);
        }
        std::sort(result_.metrics.convergence_us.begin(),
                  result_.metrics.convergence_us.end());
    }

    ScenarioConfig cfg_;
    detail::DetRng rng_;
    Acl acl_;

    std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<>> queue_;
    uint64_t order_ = 0;
    uint64_t now_ = 0;
    bool ended_ = false;

    std::map<std::string, RobotState> robots_;
    std::map<std::string, Node> nodes_;

    std::optional<LandmarkChain> current_plan_;
    std::deque<LandmarkId> remaining_;
    uint64_t last_progress_us_ = 0;

    uint64_t poll_request_id_ = 0;
    std::map<std::string, PanoramicView> poll_views_;

    uint64_t spoof_seq_ = 1;
    std::map<size_t, std::vector<Block>> fork_chains_;
    std::map<size_t, uint64_t> fork_mined_;

    std::map<std::string, uint64_t> submit_times_;  // tx digest hex -> time
    std::map<std::string, std::map<std::string, uint64_t>> commit_times_;

    SimResult result_;
};

inline SimResult run_scenario(const ScenarioConfig& cfg) {
    return Simulation(cfg).run();
}

// --- mission overhead comparison ----------------------------------------------

struct MissionRun {
    bool bc_enabled = false;
    uint32_t replication = 0;
    uint64_t seed = 0;
    MetricsRecord metrics;
};

struct ComparisonReport {
    std::vector<MissionRun> runs;
    double bc_mean_us = 0;
    double nobc_mean_us = 0;
    double delta = 0;  // (t_bc - t_nobc) / t_nobc
    double threshold = 0.05;
    bool comparable = false;
    bool within_threshold = false;
    // Absolute mission times are hardware- and scenario-specific; only the
    // relative overhead is meaningful for cross-setup comparison.
    std::string note =
        "absolute mission times are setup-specific; compare only the relative "
        "overhead delta";
};

// Runs the same seeded scenario with the ledger on and off, a few
// replications each, and reports the relative end-to-end overhead.
inline ComparisonReport compare_missions(const ScenarioConfig& cfg) {
    ComparisonReport report;
    report.threshold = cfg.mission.overhead_threshold;
    double bc_total = 0, nobc_total = 0;
    uint32_t bc_ok = 0, nobc_ok = 0;
    for (uint32_t rep = 0; rep < cfg.mission.replications; ++rep) {
        for (bool bc : {true, false}) {
            ScenarioConfig run_cfg = cfg;
            run_cfg.seed = cfg.seed + rep;
            run_cfg.mission.blockchain_enabled = bc;
            run_cfg.mission.compare = false;
            auto result = run_scenario(run_cfg);
            MissionRun run;
            run.bc_enabled = bc;
            run.replication = rep;
            run.seed = run_cfg.seed;
            run.metrics = result.metrics;
            report.runs.push_back(run);
            if (result.metrics.mission_success) {
                if (bc) {
                    bc_total += static_cast<double>(result.metrics.mission_time_us);
                    ++bc_ok;
                } else {
                    nobc_total += static_cast<double>(result.metrics.mission_time_us);
                    ++nobc_ok;
                }
            }
        }
    }
    report.comparable = bc_ok == cfg.mission.replications &&
                        nobc_ok == cfg.mission.replications && nobc_total > 0;
    if (report.comparable) {
        report.bc_mean_us = bc_total / bc_ok;
        report.nobc_mean_us = nobc_total / nobc_ok;
        report.delta = (report.bc_mean_us - report.nobc_mean_us) / report.nobc_mean_us;
        report.within_threshold = report.delta <= report.threshold;
    }
    return report;
}

}  // namespace bcvh
