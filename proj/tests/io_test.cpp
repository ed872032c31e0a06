#include <gtest/gtest.h>

#include <sstream>

#include "bcvh/json_io.hpp"
#include "reference_fixtures.hpp"

using namespace bcvh;

namespace {

TEST(ScenarioJson, LoadsBundledScenarios) {
    for (const char* name : {"fig2.json", "reference.json", "resilience.json",
                             "attack_demo.json"}) {
        auto cfg =
            load_scenario_file(std::string(BCVH_SOURCE_DIR) + "/scenarios/" + name);
        EXPECT_FALSE(cfg.robots.empty()) << name;
        EXPECT_TRUE(cfg.world.landmarks.count(cfg.world.goal_landmark)) << name;
    }
}

TEST(ScenarioJson, MissingFieldNamedInError) {
    Json j = Json::parse(R"({"world": {"arena": {"width": 1, "height": 1},
        "landmarks": {"G": [0, 0]}, "goal_landmark": "G", "sensor_range": 5},
        "robots": [{"id": "R1", "start": [0, 0]}]})");
    try {
        scenario_from_json(j);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("mission"), std::string::npos);
    }
}

TEST(ScenarioJson, RejectsBadQuorum) {
    Json j;
    j["world"] = world_to_json(World{10, 10, {{"G", {1, 1}}}, {}, "G", 5});
    j["robots"] = Json::array({{{"id", "R1"}, {"start", {0, 0}}}});
    j["mission"] = {{"requester", "R1"}};
    j["consensus"] = {{"quorum", 0.3}};
    EXPECT_THROW(scenario_from_json(j), ConfigError);
    j["consensus"] = {{"quorum", 0.5}};
    EXPECT_NO_THROW(scenario_from_json(j));
}

TEST(ScenarioJson, UnknownRequesterRejected) {
    Json j;
    j["world"] = world_to_json(World{10, 10, {{"G", {1, 1}}}, {}, "G", 5});
    j["robots"] = Json::array({{{"id", "R1"}, {"start", {0, 0}}}});
    j["mission"] = {{"requester", "R9"}};
    EXPECT_THROW(scenario_from_json(j), ConfigError);
}

TEST(WorldJson, RoundTrip) {
    World w{60, 40, {{"A", {1, 2}}, {"G", {3, 4}}}, {{{5, 6}, 1.5}}, "G", 14};
    World back = world_from_json(world_to_json(w));
    EXPECT_EQ(back.landmarks, w.landmarks);
    EXPECT_EQ(back.goal_landmark, w.goal_landmark);
    EXPECT_EQ(back.obstacles.size(), 1u);
    EXPECT_EQ(back.sensor_range, w.sensor_range);
}

TEST(AclJson, RoundTrip) {
    auto acl = fixtures::reference_acl();
    acl.entries["OBS"] = {keygen("OBS", fixtures::filled_seed(9)).public_key,
                          Role::Observer};
    Acl back = acl_from_json(acl_to_json(acl));
    EXPECT_EQ(back, acl);
}

TEST(LedgerJsonl, RoundTripPreservesValidity) {
    auto acl = fixtures::reference_acl();
    auto state = make_ledger(acl);
    auto b1 = fixtures::reference_block1();
    ASSERT_TRUE(try_apply_block(state, b1, acl).ok);

    std::stringstream buf;
    write_ledger_jsonl(buf, state.blocks);
    auto blocks = read_ledger_jsonl(buf);
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks, state.blocks);
    EXPECT_TRUE(verify_chain(blocks, acl).ok);
}

TEST(LedgerJsonl, TruncatedLineRejected) {
    std::stringstream buf("{\"header\": {\"index\": 0");
    EXPECT_THROW(read_ledger_jsonl(buf), ConfigError);
}

TEST(Overrides, DottedPathAssignment) {
    Json j = Json::parse(R"({"consensus": {"difficulty": 8}, "seed": 1})");
    apply_override(j, "consensus.difficulty=0");
    apply_override(j, "seed=99");
    apply_override(j, "mission.requester=R2");
    EXPECT_EQ(j["consensus"]["difficulty"], 0);
    EXPECT_EQ(j["seed"], 99);
    EXPECT_EQ(j["mission"]["requester"], "R2");
    EXPECT_THROW(apply_override(j, "no-equals-sign"), ConfigError);
}

TEST(GoldenVectors, CountAndDeterminism) {
    auto text = golden_vectors_text();
    EXPECT_EQ(text, golden_vectors_text());
    size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    EXPECT_GE(lines, 10u);
}

TEST(GoldenVectors, MatchFrozenReferenceValues) {
    std::map<std::string, std::pair<std::string, std::string>> by_label;
    std::istringstream in(golden_vectors_text());
    std::string line;
    while (std::getline(in, line)) {
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        ASSERT_NE(t1, std::string::npos);
        ASSERT_NE(t2, std::string::npos);
        by_label[line.substr(0, t1)] = {line.substr(t1 + 1, t2 - t1 - 1),
                                        line.substr(t2 + 1)};
    }
    EXPECT_EQ(by_label.at("sha512_tx_r1_unsigned").first, fixtures::kR1UnsignedHex);
    EXPECT_EQ(by_label.at("sha512_tx_r1_zero_sig").second, fixtures::kR1ZeroSigSha512);
    EXPECT_EQ(by_label.at("sha512_tx_r2_l7").first, fixtures::kR2L7Hex);
    EXPECT_EQ(by_label.at("sha512_acl_reference").second, fixtures::kAclDigest);
    EXPECT_EQ(by_label.at("sha512_genesis_header").second, fixtures::kGenesisHash);
    EXPECT_EQ(by_label.at("sha512_block1_header").second, fixtures::kBlock1Hash);
    EXPECT_EQ(by_label.at("ed25519_pub_zero_seed").second, fixtures::kZeroSeedPub);
    EXPECT_EQ(by_label.at("ed25519_sig_zero_seed_r1tx").second,
              fixtures::kR1ZeroSeedSig);
}

TEST(MetricsCsv, RowFormat) {
    MetricsRecord m;
    m.mission_time_us = 123;
    m.hops = 3;
    m.distance_m = 1.5;
    m.blocks_committed = 4;
    m.msgs_sent = 55;
    m.convergence_us = {100, 200};
    m.ledger_bytes = 999;
    m.validations = 12;
    std::ostringstream out;
    write_metrics_csv_row(out, "fig2", 42, true, "R1", m);
    EXPECT_EQ(out.str(), "fig2,42,1,R1,123,3,1.500,4,55,150.0,999,12\n");
}

}  // namespace
