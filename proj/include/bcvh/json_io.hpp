#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "bcvh/attack.hpp"
#include "bcvh/sim.hpp"

namespace bcvh {

using Json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io_detail {

inline const Json& require(const Json& j, const char* field,
                           const std::string& where) {
    auto it = j.find(field);
    if (it == j.end())
        throw ConfigError(std::string("missing field '") + field + "' in " + where);
    return *it;
}

template <size_t N>
std::array<uint8_t, N> hex_field(const Json& j, const char* field,
                                 const std::string& where) {
    auto parsed = fixed_from_hex<N>(require(j, field, where).get<std::string>());
    if (!parsed)
        throw ConfigError(std::string("field '") + field + "' in " + where +
                          " is not " + std::to_string(N * 2) + " hex digits");
    return *parsed;
}

}  // namespace io_detail

// --- world ---------------------------------------------------------------

inline World world_from_json(const Json& j) {
    using io_detail::require;
    World w;
    const auto& arena = require(j, "arena", "world");
    w.arena_width = require(arena, "width", "world.arena").get<double>();
    w.arena_height = require(arena, "height", "world.arena").get<double>();
    for (const auto& [id, pos] : require(j, "landmarks", "world").items()) {
        if (!pos.is_array() || pos.size() != 2)
            throw ConfigError("landmark '" + id + "' must be [x, y]");
        w.landmarks[id] = {pos[0].get<double>(), pos[1].get<double>()};
    }
    if (j.contains("obstacles")) {
        for (const auto& ob : j["obstacles"]) {
            if (!ob.is_array() || ob.size() != 3)
                throw ConfigError("obstacle must be [cx, cy, radius]");
            w.obstacles.push_back(
                {{ob[0].get<double>(), ob[1].get<double>()}, ob[2].get<double>()});
        }
    }
    w.goal_landmark = require(j, "goal_landmark", "world").get<std::string>();
    if (!w.landmarks.count(w.goal_landmark))
        throw ConfigError("goal_landmark '" + w.goal_landmark +
                          "' is not in world.landmarks");
    w.sensor_range = require(j, "sensor_range", "world").get<double>();
    return w;
}

inline Json world_to_json(const World& w) {
    Json j;
    j["arena"] = {{"width", w.arena_width}, {"height", w.arena_height}};
    Json lms = Json::object();
    for (const auto& [id, p] : w.landmarks) lms[id] = {p.x, p.y};
    j["landmarks"] = lms;
    Json obs = Json::array();
    for (const auto& ob : w.obstacles)
        obs.push_back({ob.center.x, ob.center.y, ob.radius});
    j["obstacles"] = obs;
    j["goal_landmark"] = w.goal_landmark;
    j["sensor_range"] = w.sensor_range;
    return j;
}

// --- scenario ---------------------------------------------------------------

inline AdversaryKind adversary_kind_from_name(const std::string& name) {
    if (name == "tamper") return AdversaryKind::Tamper;
    if (name == "spoof") return AdversaryKind::Spoof;
    if (name == "replay") return AdversaryKind::Replay;
    if (name == "flood") return AdversaryKind::Flood;
    if (name == "withhold_votes") return AdversaryKind::WithholdVotes;
    if (name == "fork_miner") return AdversaryKind::ForkMiner;
    throw ConfigError("unknown adversary kind '" + name + "'");
}

inline ScenarioConfig scenario_from_json(const Json& j) {
    using io_detail::require;
    ScenarioConfig cfg;
    cfg.name = j.value("name", "scenario");
    cfg.seed = j.value("seed", uint64_t{0});
    cfg.world = world_from_json(require(j, "world", "scenario"));

    for (const auto& rj : require(j, "robots", "scenario")) {
        RobotSpec r;
        r.id = require(rj, "id", "robot").get<std::string>();
        const auto& start = require(rj, "start", "robot '" + r.id + "'");
        r.start.x = start[0].get<double>();
        r.start.y = start[1].get<double>();
        if (start.size() > 2) r.start.heading = start[2].get<double>();
        r.speed_mps = rj.value("speed_mps", 0.0);
        r.sense_period_us = rj.value("sense_period_us", uint64_t{1'000'000});
        if (rj.contains("patrol")) {
            for (const auto& p : rj["patrol"])
                r.patrol.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        cfg.robots.push_back(std::move(r));
    }
    if (cfg.robots.empty()) throw ConfigError("scenario has no robots");

    if (j.contains("observers"))
        for (const auto& o : j["observers"]) cfg.observers.push_back(o.get<std::string>());

    if (j.contains("consensus")) {
        const auto& c = j["consensus"];
        cfg.consensus.difficulty = c.value("difficulty", cfg.consensus.difficulty);
        cfg.consensus.block_interval_us =
            c.value("block_interval_us", cfg.consensus.block_interval_us);
        cfg.consensus.quorum = c.value("quorum", cfg.consensus.quorum);
        cfg.consensus.max_txs_per_robot_per_block = c.value(
            "max_txs_per_robot_per_block", cfg.consensus.max_txs_per_robot_per_block);
        cfg.consensus.round_timeout_us =
            c.value("round_timeout_us", cfg.consensus.round_timeout_us);
        cfg.consensus.heartbeat_every =
            c.value("heartbeat_every", cfg.consensus.heartbeat_every);
        if (cfg.consensus.quorum < 0.5 || cfg.consensus.quorum > 1.0)
            throw ConfigError("consensus.quorum must be in [0.5, 1]");
        if (cfg.consensus.block_interval_us == 0)
            throw ConfigError("consensus.block_interval_us must be positive");
        if (cfg.consensus.difficulty > kMaxDifficulty)
            throw ConfigError("consensus.difficulty above the cap of 32");
    }

    if (j.contains("transport")) {
        const auto& t = j["transport"];
        if (t.contains("latency_us")) {
            cfg.transport.latency_min_us = t["latency_us"][0].get<uint64_t>();
            cfg.transport.latency_max_us = t["latency_us"][1].get<uint64_t>();
            if (cfg.transport.latency_max_us < cfg.transport.latency_min_us)
                throw ConfigError("transport.latency_us must be [min, max]");
        }
        cfg.transport.drop_probability = t.value("drop_probability", 0.0);
        if (cfg.transport.drop_probability < 0 || cfg.transport.drop_probability >= 1)
            throw ConfigError("transport.drop_probability must be in [0, 1)");
        if (t.contains("partitions")) {
            for (const auto& pj : t["partitions"]) {
                PartitionWindow w;
                w.start_us = require(pj, "start_us", "partition").get<uint64_t>();
                w.end_us = require(pj, "end_us", "partition").get<uint64_t>();
                for (const auto& g : require(pj, "groups", "partition")) {
                    std::set<std::string> group;
                    for (const auto& id : g) group.insert(id.get<std::string>());
                    w.groups.push_back(std::move(group));
                }
                cfg.transport.partitions.push_back(std::move(w));
            }
        }
    }

    if (j.contains("adversaries")) {
        for (const auto& aj : j["adversaries"]) {
            AdversarySpec a;
            a.node_id = require(aj, "node", "adversary").get<std::string>();
            a.kind = adversary_kind_from_name(
                require(aj, "kind", "adversary").get<std::string>());
            a.start_us = aj.value("start_us", uint64_t{0});
            a.mode = aj.value("mode", "");
            a.period_us = aj.value("period_us", a.period_us);
            a.fork_depth = aj.value("fork_depth", a.fork_depth);
            a.flood_multiplier = aj.value("flood_multiplier", a.flood_multiplier);
            cfg.adversaries.push_back(std::move(a));
        }
    }

    const auto& m = require(j, "mission", "scenario");
    cfg.mission.requester = require(m, "requester", "mission").get<std::string>();
    cfg.mission.blockchain_enabled = m.value("blockchain_enabled", true);
    cfg.mission.compare = m.value("compare", false);
    cfg.mission.overhead_threshold =
        m.value("overhead_threshold", cfg.mission.overhead_threshold);
    cfg.mission.replications = m.value("replications", cfg.mission.replications);

    bool requester_known = false;
    for (const auto& r : cfg.robots) requester_known |= r.id == cfg.mission.requester;
    if (!requester_known)
        throw ConfigError("mission.requester '" + cfg.mission.requester +
                          "' is not a robot");

    cfg.duration_us = j.value("duration_us", cfg.duration_us);
    cfg.patience_us = j.value("patience_us", cfg.patience_us);
    return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ConfigError("scenario parse error in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

// Dotted-path override, e.g. "consensus.difficulty=0". The value is parsed
// as JSON when possible and falls back to a plain string.
inline void apply_override(Json& root, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key.path=value: " + assignment);
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    std::string pointer = "/";
    for (char c : path) pointer += c == '.' ? '/' : c;
    Json parsed = Json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    root[Json::json_pointer(pointer)] = parsed;
}

// --- ACL file ---------------------------------------------------------------

inline Json acl_to_json(const Acl& acl) {
    Json j = Json::object();
    for (const auto& [id, entry] : acl.entries) {
        j[id] = {{"pubkey", to_hex(entry.public_key)},
                 {"role", role_name(entry.role)}};
    }
    return j;
}

inline Acl acl_from_json(const Json& j) {
    Acl acl;
    for (const auto& [id, entry] : j.items()) {
        AclEntry e;
        e.public_key = io_detail::hex_field<32>(entry, "pubkey", "acl entry");
        auto role = io_detail::require(entry, "role", "acl entry").get<std::string>();
        if (role == "member")
            e.role = Role::Member;
        else if (role == "observer")
            e.role = Role::Observer;
        else
            throw ConfigError("acl role must be member or observer, got '" + role + "'");
        acl.entries[id] = e;
    }
    if (acl.entries.empty()) throw ConfigError("acl file has no entries");
    return acl;
}

// --- ledger export: one block per line ----------------------------------------

inline Json block_to_json(const Block& b) {
    Json txs = Json::array();
    for (const auto& tx : b.txs) {
        Json sectors = Json::array();
        for (const auto& sector : tx.view.sectors)
            sectors.push_back(std::vector<std::string>(sector.begin(), sector.end()));
        txs.push_back({{"robot_id", tx.robot_id},
                       {"seq", tx.seq},
                       {"timestamp_us", tx.timestamp_us},
                       {"view", sectors},
                       {"signature", to_hex(tx.signature)}});
    }
    return Json{{"header",
                 {{"index", b.header.index},
                  {"prev_hash", to_hex(b.header.prev_hash)},
                  {"body_digest", to_hex(b.header.body_digest)},
                  {"timestamp_us", b.header.timestamp_us},
                  {"proposer_id", b.header.proposer_id},
                  {"difficulty", b.header.difficulty},
                  {"nonce", b.header.nonce}}},
                {"txs", txs}};
}

inline Block block_from_json(const Json& j) {
    using io_detail::require;
    Block b;
    const auto& h = require(j, "header", "block");
    b.header.index = require(h, "index", "header").get<uint64_t>();
    b.header.prev_hash = io_detail::hex_field<64>(h, "prev_hash", "header");
    b.header.body_digest = io_detail::hex_field<64>(h, "body_digest", "header");
    b.header.timestamp_us = require(h, "timestamp_us", "header").get<uint64_t>();
    b.header.proposer_id = require(h, "proposer_id", "header").get<std::string>();
    b.header.difficulty = require(h, "difficulty", "header").get<uint32_t>();
    b.header.nonce = require(h, "nonce", "header").get<uint64_t>();
    for (const auto& tj : require(j, "txs", "block")) {
        FovTransaction tx;
        tx.robot_id = require(tj, "robot_id", "tx").get<std::string>();
        tx.seq = require(tj, "seq", "tx").get<uint64_t>();
        tx.timestamp_us = require(tj, "timestamp_us", "tx").get<uint64_t>();
        const auto& sectors = require(tj, "view", "tx");
        if (!sectors.is_array() || sectors.size() != kSectorCount)
            throw ConfigError("tx view must have exactly 6 sectors");
        for (size_t s = 0; s < kSectorCount; ++s)
            for (const auto& id : sectors[s])
                tx.view.sectors[s].insert(id.get<std::string>());
        tx.signature = io_detail::hex_field<64>(tj, "signature", "tx");
        b.txs.push_back(std::move(tx));
    }
    return b;
}

inline void write_ledger_jsonl(std::ostream& out, const std::vector<Block>& blocks) {
    for (const auto& b : blocks) out << block_to_json(b).dump() << "\n";
}

inline std::vector<Block> read_ledger_jsonl(std::istream& in) {
    std::vector<Block> blocks;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw ConfigError("ledger line " + std::to_string(line_no) +
                              " is not valid JSON");
        blocks.push_back(block_from_json(j));
    }
    if (blocks.empty()) throw ConfigError("ledger file has no blocks");
    return blocks;
}

// --- trace / metrics ----------------------------------------------------------

inline void write_trace_jsonl(std::ostream& out, const std::vector<TraceEvent>& trace) {
    for (const auto& e : trace) {
        out << Json{{"time_us", e.time_us},
                    {"node", e.node},
                    {"event", e.event},
                    {"detail", e.detail}}
                   .dump()
            << "\n";
    }
}

inline constexpr const char* kMetricsCsvHeader =
    "scenario,seed,bc_enabled,robot,mission_time_us,hops,distance_m,blocks,msgs,"
    "mean_convergence_us,ledger_bytes,validations";

inline void write_metrics_csv_row(std::ostream& out, const std::string& scenario,
                                  uint64_t seed, bool bc_enabled,
                                  const std::string& robot, const MetricsRecord& m) {
    char dist[32];
    std::snprintf(dist, sizeof(dist), "%.3f", m.distance_m);
    char conv[32];
    std::snprintf(conv, sizeof(conv), "%.1f", m.mean_convergence_us());
    out << scenario << ',' << seed << ',' << (bc_enabled ? 1 : 0) << ',' << robot
        << ',' << m.mission_time_us << ',' << m.hops << ',' << dist << ','
        << m.blocks_committed << ',' << m.msgs_sent << ',' << conv << ','
        << m.ledger_bytes << ',' << m.validations << "\n";
}

// --- golden conformance vectors -------------------------------------------------

struct GoldenVector {
    std::string label;
    Bytes input;
    Bytes output;
};

// The reference fixtures behind the cross-implementation vector file: three
// members keyed from patterned seeds, one signed view update, one mined
// block. scripts/check_vectors.py recomputes every line independently.
inline std::vector<GoldenVector> reference_conformance_vectors() {
    std::vector<GoldenVector> v;
    auto digest_vec = [&](std::string label, Bytes bytes) {
        Digest d = sha512(bytes);
        v.push_back({std::move(label), std::move(bytes), Bytes(d.begin(), d.end())});
    };

    FovTransaction r1_empty;
    r1_empty.robot_id = "R1";
    r1_empty.seq = 1;
    digest_vec("sha512_tx_r1_unsigned", canonical_tx_bytes(r1_empty, WithSignature::No));
    digest_vec("sha512_tx_r1_zero_sig", canonical_tx_bytes(r1_empty, WithSignature::Yes));

    FovTransaction r2;
    r2.robot_id = "R2";
    r2.seq = 3;
    r2.timestamp_us = 1000;
    r2.view.sectors[0] = {"L7"};
    digest_vec("sha512_tx_r2_l7", canonical_tx_bytes(r2, WithSignature::No));
    digest_vec("sha512_empty", Bytes{});

    Acl acl;
    std::map<std::string, PrivateSeed> seeds;
    for (uint8_t i = 1; i <= 3; ++i) {
        PrivateSeed seed{};
        seed.fill(i);
        std::string id = "R" + std::to_string(i);
        seeds[id] = seed;
        acl.entries[id] = {ed25519_public_from_seed(seed), Role::Member};
    }
    digest_vec("sha512_acl_reference", canonical_acl_bytes(acl));

    Block genesis = make_genesis(acl);
    digest_vec("sha512_genesis_header", header_bytes(genesis.header));

    FovTransaction tx;
    tx.robot_id = "R1";
    tx.seq = 1;
    tx.timestamp_us = 1000;
    tx.view.sectors[0] = {"L12"};
    tx = sign_tx(RobotIdentity{"R1", ed25519_public_from_seed(seeds["R1"]),
                               seeds["R1"], Role::Member},
                 tx);
    digest_vec("sha512_block1_tx", canonical_tx_bytes(tx, WithSignature::Yes));

    Block block1 = mine_block(genesis.header, {tx}, "R1", 2000, 8);
    digest_vec("sha512_block1_header", header_bytes(block1.header));

    PrivateSeed zero{};
    auto pub_vec = [&](std::string label, const PrivateSeed& seed) {
        PublicKey pk = ed25519_public_from_seed(seed);
        v.push_back({std::move(label), Bytes(seed.begin(), seed.end()),
                     Bytes(pk.begin(), pk.end())});
    };
    pub_vec("ed25519_pub_zero_seed", zero);
    pub_vec("ed25519_pub_r1", seeds["R1"]);

    // signature vectors: input is seed || message, output the detached signature
    auto sig_vec = [&](std::string label, const PrivateSeed& seed, const Bytes& msg) {
        Signature sig = ed25519_sign(seed, msg);
        Bytes input(seed.begin(), seed.end());
        append_raw(input, msg);
        v.push_back({std::move(label), std::move(input),
                     Bytes(sig.begin(), sig.end())});
    };
    Digest r1_digest = sha512(canonical_tx_bytes(r1_empty, WithSignature::No));
    sig_vec("ed25519_sig_zero_seed_r1tx", zero,
            Bytes(r1_digest.begin(), r1_digest.end()));
    Digest block1_digest = sha512(tx_signing_bytes(tx));
    sig_vec("ed25519_sig_r1_block1tx", seeds["R1"],
            Bytes(block1_digest.begin(), block1_digest.end()));
    return v;
}

// label<TAB>hex-bytes<TAB>hex-digest, one record per line.
inline std::string golden_vectors_text() {
    std::ostringstream out;
    for (const auto& gv : reference_conformance_vectors())
        out << gv.label << '\t' << to_hex(gv.input) << '\t' << to_hex(gv.output)
            << "\n";
    return out.str();
}

}  // namespace bcvh
