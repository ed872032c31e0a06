#include <gtest/gtest.h>

#include "bcvh/acl.hpp"
#include "reference_fixtures.hpp"

using namespace bcvh;

namespace {

TEST(Keygen, ZeroSeedGolden) {
    auto id = keygen("Z", fixtures::filled_seed(0x00));
    EXPECT_EQ(to_hex(id.public_key), fixtures::kZeroSeedPub);
}

TEST(Keygen, DeterministicAndDistinct) {
    auto a = keygen("A", fixtures::filled_seed(0x11));
    auto b = keygen("A", fixtures::filled_seed(0x11));
    auto c = keygen("A", fixtures::filled_seed(0x12));
    EXPECT_EQ(a.public_key, b.public_key);
    EXPECT_NE(a.public_key, c.public_key);
}

TEST(Keygen, ReferencePublicKeys) {
    auto ids = fixtures::reference_identities();
    EXPECT_EQ(to_hex(ids[0].public_key), fixtures::kPubR1);
}

TEST(AclDigest, Golden) {
    EXPECT_EQ(to_hex(acl_digest(fixtures::reference_acl())), fixtures::kAclDigest);
}

TEST(SignTx, GoldenSignatureUnderZeroSeed) {
    auto id = keygen("R1", fixtures::filled_seed(0x00));
    FovTransaction tx;
    tx.robot_id = "R1";
    tx.seq = 1;
    tx.timestamp_us = 0;
    auto signed_tx = sign_tx(id, tx);
    EXPECT_EQ(to_hex(signed_tx.signature), fixtures::kR1ZeroSeedSig);
}

TEST(SignTx, RefusesForeignRobotId) {
    auto r1 = keygen("R1", fixtures::filled_seed(0x01));
    FovTransaction tx;
    tx.robot_id = "R2";
    tx.seq = 1;
    EXPECT_THROW(sign_tx(r1, tx), std::invalid_argument);
}

TEST(VerifyTx, AcceptsHonestMember) {
    auto acl = fixtures::reference_acl();
    auto tx = fixtures::reference_block1_tx();
    EXPECT_EQ(verify_tx(tx, acl), TxVerdict::Ok);
}

TEST(VerifyTx, ForgedSignature) {
    auto acl = fixtures::reference_acl();
    auto tx = fixtures::reference_block1_tx();
    tx.signature[10] ^= 0x40;
    EXPECT_EQ(verify_tx(tx, acl), TxVerdict::BadSignature);
}

TEST(VerifyTx, UnknownIdEvenWithValidKey) {
    auto acl = fixtures::reference_acl();
    auto mallory = keygen("MALLORY", fixtures::filled_seed(0x66));
    FovTransaction tx;
    tx.robot_id = "MALLORY";
    tx.seq = 1;
    tx = sign_tx(mallory, tx);
    EXPECT_EQ(verify_tx(tx, acl), TxVerdict::UnknownId);
}

TEST(VerifyTx, ObserverRoleRejected) {
    auto acl = fixtures::reference_acl();
    auto obs = keygen("OBS", fixtures::filled_seed(0x07), Role::Observer);
    acl.entries["OBS"] = {obs.public_key, Role::Observer};
    FovTransaction tx;
    tx.robot_id = "OBS";
    tx.seq = 1;
    tx = sign_tx(obs, tx);
    EXPECT_EQ(verify_tx(tx, acl), TxVerdict::WrongRole);
}

TEST(Acl, MemberBookkeeping) {
    auto acl = fixtures::reference_acl();
    auto obs = keygen("OBS", fixtures::filled_seed(0x07), Role::Observer);
    acl.entries["OBS"] = {obs.public_key, Role::Observer};
    EXPECT_EQ(acl.member_count(), 3u);
    EXPECT_FALSE(acl.is_member("OBS"));
    EXPECT_EQ(acl.sorted_members(), (std::vector<std::string>{"R1", "R2", "R3"}));
}

TEST(Receipts, IssueThenVerify) {
    auto acl = fixtures::reference_acl();
    auto r2 = fixtures::reference_identities()[1];
    Digest msg = sha512(Bytes{1, 2, 3});
    auto receipt = issue_receipt(r2, msg, "R1", 12345);
    EXPECT_TRUE(verify_receipt(receipt, acl));
}

TEST(Receipts, MutatedTimeFailsVerification) {
    auto acl = fixtures::reference_acl();
    auto r2 = fixtures::reference_identities()[1];
    Digest msg = sha512(Bytes{1, 2, 3});
    auto receipt = issue_receipt(r2, msg, "R1", 12345);
    receipt.receive_time_us = 99999;
    EXPECT_FALSE(verify_receipt(receipt, acl));
}

}  // namespace
