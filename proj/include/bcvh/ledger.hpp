#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcvh/acl.hpp"
#include "bcvh/block.hpp"

namespace bcvh {

// Outcome of block or chain validation. `ok` with an empty reason means
// valid; otherwise `reason` names the first failed check and `block_index`
// points at the offending block.
struct Verdict {
    bool ok = true;
    std::string reason;
    uint64_t block_index = 0;

    static Verdict valid() { return {}; }
    static Verdict fail(std::string why, uint64_t index) {
        return {false, std::move(why), index};
    }
};

struct LatestView {
    uint64_t seq = 0;
    uint64_t timestamp_us = 0;
    PanoramicView view;

    bool operator==(const LatestView&) const = default;
};

// A validated chain plus the derived robot -> most recent committed view
// index. apply_block keeps the index incrementally so latest_view stays a
// constant-time map lookup regardless of chain length.
struct LedgerState {
    std::vector<Block> blocks;
    std::map<std::string, LatestView> latest_views;
    Digest acl_digest{};

    const BlockHeader& tip() const { return blocks.back().header; }
    uint64_t height() const { return blocks.empty() ? 0 : tip().index; }

    std::map<std::string, uint64_t> committed_seqs() const {
        std::map<std::string, uint64_t> out;
        for (const auto& [robot, lv] : latest_views) out[robot] = lv.seq;
        return out;
    }
};

inline LedgerState make_ledger(const Acl& acl) {
    LedgerState s;
    s.blocks.push_back(make_genesis(acl));
    s.acl_digest = acl_digest(acl);
    return s;
}

// Full validation of one block against its parent: linkage, index, body
// digest, proof of work, proposer membership, per-tx signatures and
// sequence freshness. The verdict carries the first failed check.
inline Verdict verify_block(const Block& block, const BlockHeader& parent,
                            const Acl& acl,
                            const std::map<std::string, uint64_t>& committed_seqs) {
    const BlockHeader& h = block.header;
    const uint64_t idx = h.index;
    if (h.prev_hash != block_hash(parent))
        return Verdict::fail("prev_hash mismatch", idx);
    if (h.index != parent.index + 1)
        return Verdict::fail("index not parent+1", idx);
    if (h.body_digest != body_digest_of(block.txs))
        return Verdict::fail("body_digest mismatch", idx);
    if (!meets_difficulty(block_hash(h), h.difficulty))
        return Verdict::fail("pow below difficulty", idx);
    if (!acl.is_member(h.proposer_id))
        return Verdict::fail("proposer not an acl member", idx);
    std::map<std::string, uint64_t> floor = committed_seqs;
    for (const auto& tx : block.txs) {
        TxVerdict tv = verify_tx(tx, acl);
        if (tv != TxVerdict::Ok)
            return Verdict::fail(std::string("tx rejected: ") + tx_verdict_name(tv), idx);
        auto it = floor.find(tx.robot_id);
        if (it != floor.end() && tx.seq <= it->second)
            return Verdict::fail("tx sequence violation for " + tx.robot_id, idx);
        floor[tx.robot_id] = tx.seq;
    }
    return Verdict::valid();
}

// Folds verify_block from genesis. Genesis itself must match make_genesis
// for the given ACL, which pins the ACL digest to the chain.
inline Verdict verify_chain(const std::vector<Block>& blocks, const Acl& acl) {
    if (blocks.empty()) return Verdict::fail("empty chain", 0);
    if (blocks[0] != make_genesis(acl))
        return Verdict::fail("genesis does not match acl", 0);
    std::map<std::string, uint64_t> seqs;
    for (size_t i = 1; i < blocks.size(); ++i) {
        Verdict v = verify_block(blocks[i], blocks[i - 1].header, acl, seqs);
        if (!v.ok) return v;
        for (const auto& tx : blocks[i].txs) seqs[tx.robot_id] = tx.seq;
    }
    return Verdict::valid();
}

struct ForkChoiceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Longest valid chain wins; an invalid chain never wins regardless of
// length; equal valid lengths go to the numerically smaller tip hash.
inline const std::vector<Block>& fork_choice(const std::vector<Block>& a,
                                             const std::vector<Block>& b,
                                             const Acl& acl) {
    const bool a_ok = verify_chain(a, acl).ok;
    const bool b_ok = verify_chain(b, acl).ok;
    if (!a_ok && !b_ok) throw ForkChoiceError("both chains invalid");
    if (!a_ok) return b;
    if (!b_ok) return a;
    if (a.size() != b.size()) return a.size() > b.size() ? a : b;
    Digest ta = block_hash(a.back().header);
    Digest tb = block_hash(b.back().header);
    return compare_digests(ta, tb) <= 0 ? a : b;
}

// Appends a block that already passed verify_block against the tip, and
// folds its txs into latest_views (highest seq per robot wins). Amortized
// cost is independent of chain length.
inline void apply_block(LedgerState& state, Block block) {
    for (const auto& tx : block.txs) {
        auto& lv = state.latest_views[tx.robot_id];
        if (tx.seq > lv.seq) lv = {tx.seq, tx.timestamp_us, tx.view};
    }
    state.blocks.push_back(std::move(block));
}

// Verify-then-apply convenience; the state is untouched on rejection.
inline Verdict try_apply_block(LedgerState& state, const Block& block, const Acl& acl) {
    Verdict v = verify_block(block, state.tip(), acl, state.committed_seqs());
    if (v.ok) apply_block(state, block);
    return v;
}

inline std::optional<LatestView> latest_view(const LedgerState& state,
                                             const std::string& robot_id) {
    auto it = state.latest_views.find(robot_id);
    if (it == state.latest_views.end()) return std::nullopt;
    return it->second;
}

// Rebuilds the ledger index from scratch; used when adopting a replacement
// chain after fork resolution.
inline LedgerState ledger_from_chain(std::vector<Block> blocks, const Acl& acl) {
    LedgerState s;
    s.acl_digest = acl_digest(acl);
    s.blocks.reserve(blocks.size());
    s.blocks.push_back(std::move(blocks[0]));
    for (size_t i = 1; i < blocks.size(); ++i) apply_block(s, std::move(blocks[i]));
    return s;
}

}  // namespace bcvh
