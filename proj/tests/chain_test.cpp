#include <gtest/gtest.h>

#include <random>

#include "bcvh/ledger.hpp"
#include "reference_fixtures.hpp"

using namespace bcvh;

namespace {

TEST(BlockHash, GenesisGolden) {
    auto genesis = make_genesis(fixtures::reference_acl());
    EXPECT_EQ(to_hex(genesis.header.body_digest), fixtures::kAclDigest);
    EXPECT_EQ(to_hex(block_hash(genesis.header)), fixtures::kGenesisHash);
}

TEST(BlockHash, NonceChangesDigest) {
    auto h = make_genesis(fixtures::reference_acl()).header;
    auto a = block_hash(h);
    h.nonce += 1;
    EXPECT_NE(block_hash(h), a);
}

TEST(BlockHash, Deterministic) {
    auto h = fixtures::reference_block1().header;
    EXPECT_EQ(block_hash(h), block_hash(h));
}

TEST(LeadingZeroBits, CountsFromMsb) {
    Digest d{};
    EXPECT_EQ(leading_zero_bits(d), 512u);
    d[0] = 0x80;
    EXPECT_EQ(leading_zero_bits(d), 0u);
    d[0] = 0x01;
    EXPECT_EQ(leading_zero_bits(d), 7u);
    d[0] = 0x00;
    d[1] = 0x20;
    EXPECT_EQ(leading_zero_bits(d), 10u);
}

TEST(MineBlock, ZeroDifficultyAcceptsFirstNonce) {
    auto genesis = make_genesis(fixtures::reference_acl());
    auto b = mine_block(genesis.header, {}, "R1", 100, 0);
    EXPECT_EQ(b.header.nonce, 0u);
}

TEST(MineBlock, GoldenNonceAtDifficulty8) {
    auto b = fixtures::reference_block1();
    EXPECT_EQ(to_hex(tx_digest(b.txs[0])), fixtures::kBlock1TxDigest);
    EXPECT_EQ(b.header.nonce, fixtures::kBlock1Nonce);
    EXPECT_EQ(to_hex(block_hash(b.header)), fixtures::kBlock1Hash);
    EXPECT_GE(leading_zero_bits(block_hash(b.header)), 8u);
}

// Nonce search is an increment-from-zero scan, so trials = nonce + 1 and the
// sample mean over 100 headers should sit near the geometric expectation 2^8.
TEST(MineBlock, ExpectedTrialsNearGeometricMean) {
    auto genesis = make_genesis(fixtures::reference_acl());
    double total_trials = 0;
    for (int i = 0; i < 100; ++i) {
        auto b = mine_block(genesis.header, {}, "R1", 3000 + i, 8);
        total_trials += static_cast<double>(b.header.nonce) + 1;
    }
    double mean = total_trials / 100.0;
    EXPECT_GE(mean, 128.0);
    EXPECT_LE(mean, 384.0);
}

TEST(MineBlock, RejectsDifficultyAboveCap) {
    auto genesis = make_genesis(fixtures::reference_acl());
    EXPECT_THROW(mine_block(genesis.header, {}, "R1", 0, 33), MiningError);
}

// --- verify_block ---------------------------------------------------------

TEST(VerifyBlock, HonestBlockValid) {
    auto acl = fixtures::reference_acl();
    auto genesis = make_genesis(acl);
    auto b = fixtures::reference_block1();
    EXPECT_TRUE(verify_block(b, genesis.header, acl, {}).ok);
}

TEST(VerifyBlock, TamperedTxBodyDigestMismatch) {
    auto acl = fixtures::reference_acl();
    auto genesis = make_genesis(acl);
    auto b = fixtures::reference_block1();
    b.txs[0].view.sectors[0] = {"EVIL"};
    auto v = verify_block(b, genesis.header, acl, {});
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, "body_digest mismatch");
}

TEST(VerifyBlock, ReplayedSeqRejected) {
    auto acl = fixtures::reference_acl();
    auto genesis = make_genesis(acl);
    auto b = fixtures::reference_block1();
    std::map<std::string, uint64_t> committed{{"R1", 1}};  // seq 1 already in
    auto v = verify_block(b, genesis.header, acl, committed);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, "tx sequence violation for R1");
}

TEST(VerifyBlock, InBlockSeqsMustIncreasePerRobot) {
    auto acl = fixtures::reference_acl();
    auto ids = fixtures::reference_identities();
    auto genesis = make_genesis(acl);

    FovTransaction a, b;
    a.robot_id = b.robot_id = "R2";
    a.seq = 5;
    b.seq = 5;  // duplicate, not strictly increasing
    auto block = mine_block(genesis.header,
                            {sign_tx(ids[1], a), sign_tx(ids[1], b)}, "R1", 10, 0);
    auto v = verify_block(block, genesis.header, acl, {});
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, "tx sequence violation for R2");
}

TEST(VerifyBlock, NonMemberProposerRejected) {
    auto acl = fixtures::reference_acl();
    auto genesis = make_genesis(acl);
    auto b = mine_block(genesis.header, {}, "NOBODY", 10, 0);
    auto v = verify_block(b, genesis.header, acl, {});
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, "proposer not an acl member");
}

// --- verify_chain ----------------------------------------------------------

std::vector<Block> honest_chain(size_t n_blocks, uint32_t difficulty = 4) {
    auto acl = fixtures::reference_acl();
    auto ids = fixtures::reference_identities();
    std::vector<Block> chain{make_genesis(acl)};
    uint64_t seq = 0;
    for (size_t i = 1; i < n_blocks; ++i) {
        const auto& signer = ids[i % ids.size()];
        FovTransaction tx;
        tx.robot_id = signer.robot_id;
        tx.seq = ++seq;
        tx.timestamp_us = i * 1000;
        tx.view.sectors[i % kSectorCount] = {"L" + std::to_string(i)};
        auto proposer = ids[(i - 1) % ids.size()].robot_id;
        chain.push_back(mine_block(chain.back().header, {sign_tx(signer, tx)},
                                   proposer, i * 1000 + 500, difficulty));
    }
    return chain;
}

TEST(VerifyChain, GenesisOnlyValid) {
    auto acl = fixtures::reference_acl();
    EXPECT_TRUE(verify_chain({make_genesis(acl)}, acl).ok);
}

TEST(VerifyChain, GenesisMustMatchAcl) {
    auto acl = fixtures::reference_acl();
    Acl other = acl;
    other.entries.erase("R3");
    auto v = verify_chain({make_genesis(other)}, acl);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.reason, "genesis does not match acl");
}

TEST(VerifyChain, ZeroedNonceDetectedAtIndex4) {
    auto acl = fixtures::reference_acl();
    auto chain = honest_chain(10, 8);
    chain[4].header.nonce = 0;
    auto v = verify_chain(chain, acl);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.block_index, 4u);
}

// An attacker without the signing keys edits block 4's payload and re-mines
// blocks 4..9; signature checks still catch the forgery.
TEST(VerifyChain, RemineWithoutKeysFailsSignatureCheck) {
    auto acl = fixtures::reference_acl();
    auto chain = honest_chain(10, 4);
    PrivateSeed attacker_seed = fixtures::filled_seed(0xaa);  // not in the ACL

    chain[4].txs[0].view.sectors[0] = {"FORGED"};
    chain[4].txs[0].signature = ed25519_sign(
        attacker_seed, sha512(tx_signing_bytes(chain[4].txs[0])));
    for (size_t i = 4; i < chain.size(); ++i) {
        chain[i] = mine_block(chain[i - 1].header, chain[i].txs,
                              chain[i].header.proposer_id,
                              chain[i].header.timestamp_us,
                              chain[i].header.difficulty);
    }
    auto v = verify_chain(chain, acl);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.block_index, 4u);
    EXPECT_EQ(v.reason, "tx rejected: bad-signature");
}

// Tamper-evidence: single-field mutations anywhere in a committed chain are
// detected. The acceptance suite runs the full randomized campaign; this is
// the unit-sized version.
TEST(VerifyChain, SingleBitMutationsDetected) {
    auto acl = fixtures::reference_acl();
    auto chain = honest_chain(6, 4);
    ASSERT_TRUE(verify_chain(chain, acl).ok);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto mutated = chain;
        size_t bi = 1 + rng() % (chain.size() - 1);
        switch (rng() % 5) {
            case 0: mutated[bi].header.timestamp_us ^= 1ull << (rng() % 40); break;
            case 1: mutated[bi].header.nonce ^= 1ull << (rng() % 63); break;
            case 2: mutated[bi].header.prev_hash[rng() % 64] ^= 1 << (rng() % 8); break;
            case 3: mutated[bi].txs[0].seq ^= 1ull << (rng() % 32); break;
            case 4: mutated[bi].txs[0].signature[rng() % 64] ^= 1 << (rng() % 8); break;
        }
        EXPECT_FALSE(verify_chain(mutated, acl).ok) << "trial " << trial;
    }
}

// --- fork choice -----------------------------------------------------------

TEST(ForkChoice, LongerValidChainWins) {
    auto acl = fixtures::reference_acl();
    auto long_chain = honest_chain(5);
    auto short_chain = honest_chain(3);
    EXPECT_EQ(fork_choice(long_chain, short_chain, acl).size(), 5u);
    EXPECT_EQ(fork_choice(short_chain, long_chain, acl).size(), 5u);
}

TEST(ForkChoice, InvalidChainNeverWins) {
    auto acl = fixtures::reference_acl();
    auto bad = honest_chain(9);
    bad[2].header.nonce = 0;  // difficulty 4 check now fails
    ASSERT_FALSE(verify_chain(bad, acl).ok);
    auto good = honest_chain(2);
    EXPECT_EQ(fork_choice(bad, good, acl).size(), 2u);
}

TEST(ForkChoice, EqualLengthTieBreaksOnSmallerTipHash) {
    auto acl = fixtures::reference_acl();
    auto base = honest_chain(4);
    auto a = base;
    auto b = base;
    a.push_back(mine_block(base.back().header, {}, "R1", 7777, 4));
    b.push_back(mine_block(base.back().header, {}, "R2", 7777, 4));
    auto ha = block_hash(a.back().header);
    auto hb = block_hash(b.back().header);
    ASSERT_NE(ha, hb);
    const auto& winner = fork_choice(a, b, acl);
    const auto& expected = compare_digests(ha, hb) < 0 ? a : b;
    EXPECT_EQ(winner, expected);
    // antisymmetric: swapping arguments picks the same chain
    EXPECT_EQ(fork_choice(b, a, acl), expected);
}

TEST(ForkChoice, BothInvalidThrows) {
    auto acl = fixtures::reference_acl();
    auto a = honest_chain(3);
    auto b = honest_chain(4);
    a[1].header.nonce ^= 1;
    b[1].header.nonce ^= 1;
    EXPECT_THROW(fork_choice(a, b, acl), ForkChoiceError);
}

// --- ledger state ----------------------------------------------------------

// Full-chain rescan; the incremental index must always agree with this.
std::map<std::string, LatestView> fold_oracle(const std::vector<Block>& blocks) {
    std::map<std::string, LatestView> out;
    for (const auto& b : blocks) {
        for (const auto& tx : b.txs) {
            auto& lv = out[tx.robot_id];
            if (tx.seq > lv.seq) lv = {tx.seq, tx.timestamp_us, tx.view};
        }
    }
    return out;
}

TEST(Ledger, EmptyBlockLeavesViewsUnchanged) {
    auto acl = fixtures::reference_acl();
    auto state = make_ledger(acl);
    auto b = mine_block(state.tip(), {}, "R1", 50, 0);
    ASSERT_TRUE(try_apply_block(state, b, acl).ok);
    EXPECT_TRUE(state.latest_views.empty());
}

TEST(Ledger, HighestSeqWinsWithinBlock) {
    auto acl = fixtures::reference_acl();
    auto ids = fixtures::reference_identities();
    auto state = make_ledger(acl);

    FovTransaction t8, t9;
    t8.robot_id = t9.robot_id = "R2";
    t8.seq = 8;
    t9.seq = 9;
    t9.view.sectors[1] = {"L99"};
    auto b = mine_block(state.tip(), {sign_tx(ids[1], t8), sign_tx(ids[1], t9)},
                        "R1", 60, 0);
    ASSERT_TRUE(try_apply_block(state, b, acl).ok);
    EXPECT_EQ(state.latest_views.at("R2").seq, 9u);
    EXPECT_EQ(state.latest_views, fold_oracle(state.blocks));
}

TEST(Ledger, RejectionLeavesStateUntouched) {
    auto acl = fixtures::reference_acl();
    auto state = make_ledger(acl);
    auto b = fixtures::reference_block1();
    b.header.nonce = 0;
    EXPECT_FALSE(try_apply_block(state, b, acl).ok);
    EXPECT_EQ(state.blocks.size(), 1u);
}

TEST(Ledger, UnknownRobotAbsent) {
    auto acl = fixtures::reference_acl();
    auto state = make_ledger(acl);
    EXPECT_FALSE(latest_view(state, "R9").has_value());
}

// Randomized equivalence between the incremental index and the fold oracle.
TEST(Ledger, IndexMatchesFoldOracleOnRandomizedRuns) {
    auto acl = fixtures::reference_acl();
    auto ids = fixtures::reference_identities();
    std::mt19937_64 rng(42);

    for (int run = 0; run < 5; ++run) {
        auto state = make_ledger(acl);
        std::map<std::string, uint64_t> next_seq;
        int txs_left = 500;
        while (txs_left > 0) {
            std::vector<FovTransaction> txs;
            int in_block = 1 + rng() % 4;
            for (int t = 0; t < in_block && txs_left > 0; ++t, --txs_left) {
                const auto& id = ids[rng() % ids.size()];
                FovTransaction tx;
                tx.robot_id = id.robot_id;
                tx.seq = ++next_seq[id.robot_id];
                tx.timestamp_us = rng() % 1000000;
                tx.view.sectors[rng() % kSectorCount] = {
                    "L" + std::to_string(rng() % 20)};
                txs.push_back(sign_tx(id, tx));
            }
            auto b = mine_block(state.tip(), txs,
                                ids[rng() % ids.size()].robot_id, rng() % 1000000, 0);
            ASSERT_TRUE(try_apply_block(state, b, acl).ok);
        }
        EXPECT_EQ(state.latest_views, fold_oracle(state.blocks));
        EXPECT_TRUE(verify_chain(state.blocks, acl).ok);
    }
}

TEST(Ledger, RebuildFromChainMatchesIncremental) {
    auto acl = fixtures::reference_acl();
    auto chain = honest_chain(8);
    auto rebuilt = ledger_from_chain(chain, acl);
    EXPECT_EQ(rebuilt.latest_views, fold_oracle(chain));
    EXPECT_EQ(rebuilt.blocks, chain);
}

}  // namespace
