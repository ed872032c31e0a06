#include <gtest/gtest.h>

#include "bcvh/tx.hpp"
#include "reference_fixtures.hpp"

using namespace bcvh;

namespace {

FovTransaction r1_empty_tx() {
    FovTransaction tx;
    tx.robot_id = "R1";
    tx.seq = 1;
    tx.timestamp_us = 0;
    return tx;
}

TEST(CanonicalTxBytes, EmptyViewLengths) {
    auto tx = r1_empty_tx();
    // "VHTX1" + lp("R1") + seq + timestamp + 6 empty sector counts
    EXPECT_EQ(canonical_tx_bytes(tx, WithSignature::No).size(), 5u + 6 + 8 + 8 + 6 * 4);
    EXPECT_EQ(canonical_tx_bytes(tx, WithSignature::Yes).size(), 115u);
}

TEST(CanonicalTxBytes, MatchesIndependentEncoder) {
    auto tx = r1_empty_tx();
    EXPECT_EQ(to_hex(canonical_tx_bytes(tx, WithSignature::No)),
              fixtures::kR1UnsignedHex);

    FovTransaction r2;
    r2.robot_id = "R2";
    r2.seq = 3;
    r2.timestamp_us = 1000;
    r2.view.sectors[0] = {"L7"};
    EXPECT_EQ(to_hex(canonical_tx_bytes(r2, WithSignature::No)), fixtures::kR2L7Hex);
}

TEST(CanonicalTxBytes, SectorIdsSortedByUtf8Bytes) {
    FovTransaction tx = r1_empty_tx();
    tx.view.sectors[2] = {"Lb", "LA", "L1"};
    auto bytes = canonical_tx_bytes(tx, WithSignature::No);
    // std::set already orders lexicographically; the encoding must place
    // "L1" < "LA" < "Lb".
    std::string flat(bytes.begin(), bytes.end());
    EXPECT_LT(flat.find("L1"), flat.find("LA"));
    EXPECT_LT(flat.find("LA"), flat.find("Lb"));
}

TEST(CanonicalTxBytes, OversizedIdRejected) {
    FovTransaction tx = r1_empty_tx();
    tx.view.sectors[0] = {std::string(65, 'x')};
    EXPECT_THROW(canonical_tx_bytes(tx, WithSignature::No), EncodingError);

    FovTransaction long_robot = r1_empty_tx();
    long_robot.robot_id = std::string(65, 'r');
    EXPECT_THROW(canonical_tx_bytes(long_robot, WithSignature::No), EncodingError);

    FovTransaction max_ok = r1_empty_tx();
    max_ok.view.sectors[0] = {std::string(64, 'x')};
    EXPECT_NO_THROW(canonical_tx_bytes(max_ok, WithSignature::No));
}

TEST(TxDigest, GoldenZeroSignature) {
    auto tx = r1_empty_tx();  // signature defaults to all zeros
    EXPECT_EQ(to_hex(tx_digest(tx)), fixtures::kR1ZeroSigSha512);
}

TEST(TxDigest, Deterministic) {
    auto tx = fixtures::reference_block1_tx();
    EXPECT_EQ(tx_digest(tx), tx_digest(tx));
}

TEST(TxDigest, SensitiveToLandmarkChange) {
    auto a = r1_empty_tx();
    a.view.sectors[3] = {"L9"};
    auto b = a;
    b.view.sectors[3] = {"L8"};
    EXPECT_NE(tx_digest(a), tx_digest(b));
}

TEST(PanoramicView, FlattenIgnoresSectorPositions) {
    PanoramicView a, b;
    a.sectors[0] = {"L1", "L2"};
    b.sectors[3] = {"L2"};
    b.sectors[5] = {"L1"};
    EXPECT_EQ(a.flattened(), b.flattened());
    EXPECT_TRUE(a.contains("L2"));
    EXPECT_FALSE(a.contains("L3"));
}

TEST(Hex, RoundTrip) {
    Bytes data{0x00, 0xff, 0x10, 0xab};
    EXPECT_EQ(to_hex(data), "00ff10ab");
    EXPECT_EQ(from_hex("00ff10ab").value(), data);
    EXPECT_FALSE(from_hex("0g").has_value());
    EXPECT_FALSE(from_hex("abc").has_value());
}

}  // namespace
