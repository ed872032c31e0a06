#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

#include "bcvh/ledger.hpp"
#include "bcvh/sim.hpp"

namespace bcvh {

struct BenchRow {
    size_t positions = 0;
    uint64_t update_ns_median = 0;
    uint64_t retrieval_ns_median = 0;
};

namespace detail {

inline uint64_t median_ns(std::vector<uint64_t>& samples) {
    if (samples.empty()) return 0;
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

}  // namespace detail

// Drives one robot along a seeded random walk, commits every view change
// through a single-node chain, and measures the wall-clock cost of the
// ledger index update (apply_block) and of latest_view retrieval.
// Simulated mission clocks are untouched; this is the only place the
// artifact reads a wall clock.
inline BenchRow bench_ledger(size_t n_positions, uint64_t seed,
                             size_t retrieval_probes = 2000) {
    using clock = std::chrono::steady_clock;
    detail::DetRng rng(seed);

    World world;
    world.arena_width = 100;
    world.arena_height = 100;
    world.sensor_range = 25;
    world.goal_landmark = "G";
    for (int i = 0; i < 40; ++i) {
        world.landmarks["L" + std::to_string(i)] = {
            static_cast<double>(rng.range(0, 1000)) / 10.0,
            static_cast<double>(rng.range(0, 1000)) / 10.0};
    }
    world.landmarks["G"] = {50, 50};

    auto identity = keygen("R1", identity_seed("R1"));
    Acl acl;
    acl.entries["R1"] = {identity.public_key, Role::Member};
    LedgerState state = make_ledger(acl);

    Pose pose{50, 50, 0};
    std::vector<uint64_t> update_ns;
    update_ns.reserve(n_positions);

    for (size_t i = 0; i < n_positions; ++i) {
        pose.x = std::clamp(pose.x + static_cast<double>(rng.range(0, 100)) / 10.0 - 5.0,
                            0.0, world.arena_width);
        pose.y = std::clamp(pose.y + static_cast<double>(rng.range(0, 100)) / 10.0 - 5.0,
                            0.0, world.arena_height);
        FovTransaction tx;
        tx.robot_id = "R1";
        tx.seq = i + 1;
        tx.timestamp_us = i * 1000;
        tx.view = compute_view(world, pose);
        tx = sign_tx(identity, tx);
        Block block = mine_block(state.tip(), {tx}, "R1", i * 1000 + 500, 0);
        // validation is not part of the measured index update
        if (!verify_block(block, state.tip(), acl, state.committed_seqs()).ok)
            throw std::logic_error("bench produced an invalid block");

        auto t0 = clock::now();
        apply_block(state, block);
        auto t1 = clock::now();
        update_ns.push_back(static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }

    std::vector<uint64_t> retrieval_ns;
    retrieval_ns.reserve(retrieval_probes);
    uint64_t checksum = 0;
    for (size_t i = 0; i < retrieval_probes; ++i) {
        auto t0 = clock::now();
        auto lv = latest_view(state, "R1");
        auto t1 = clock::now();
        if (lv) checksum += lv->seq;
        retrieval_ns.push_back(static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
    if (checksum == 0 && n_positions > 0)
        throw std::logic_error("retrieval returned nothing");

    BenchRow row;
    row.positions = n_positions;
    row.update_ns_median = detail::median_ns(update_ns);
    row.retrieval_ns_median = detail::median_ns(retrieval_ns);
    return row;
}

// Replays a finished chain through a fresh ledger and reports the median
// wall-clock cost of the index update and of view retrieval. Used to attach
// wall timings to mission metrics without touching the simulated clock.
inline std::pair<uint64_t, uint64_t> measure_ledger_replay(const LedgerState& ledger,
                                                           size_t retrieval_probes = 1000) {
    using clock = std::chrono::steady_clock;
    if (ledger.blocks.empty()) return {0, 0};
    LedgerState fresh;
    fresh.acl_digest = ledger.acl_digest;
    fresh.blocks.push_back(ledger.blocks[0]);

    std::vector<uint64_t> update_ns;
    for (size_t i = 1; i < ledger.blocks.size(); ++i) {
        auto t0 = clock::now();
        apply_block(fresh, ledger.blocks[i]);
        auto t1 = clock::now();
        update_ns.push_back(static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }

    std::vector<std::string> robots;
    for (const auto& [robot, lv] : fresh.latest_views) robots.push_back(robot);
    std::vector<uint64_t> retrieval_ns;
    if (!robots.empty()) {
        for (size_t i = 0; i < retrieval_probes; ++i) {
            const auto& robot = robots[i % robots.size()];
            auto t0 = clock::now();
            auto lv = latest_view(fresh, robot);
            auto t1 = clock::now();
            if (!lv) throw std::logic_error("replay lost a view");
            retrieval_ns.push_back(static_cast<uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                    .count()));
        }
    }
    return {detail::median_ns(update_ns), detail::median_ns(retrieval_ns)};
}

}  // namespace bcvh
