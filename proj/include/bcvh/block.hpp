#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bcvh/acl.hpp"
#include "bcvh/bytes.hpp"
#include "bcvh/crypto.hpp"
#include "bcvh/tx.hpp"

namespace bcvh {

inline constexpr uint32_t kMaxDifficulty = 32;  // leading zero bits
inline constexpr const char* kGenesisProposer = "GENESIS";

struct BlockHeader {
    uint64_t index = 0;
    Digest prev_hash{};
    Digest body_digest{};
    uint64_t timestamp_us = 0;
    std::string proposer_id;
    uint32_t difficulty = 0;  // required leading zero bits of the block hash
    uint64_t nonce = 0;

    bool operator==(const BlockHeader&) const = default;
};

struct Block {
    BlockHeader header;
    std::vector<FovTransaction> txs;

    bool operator==(const Block&) const = default;
};

// "VHBK1" | index u64 BE | prev_hash (64) | body_digest (64) |
// timestamp_us u64 BE | lp(proposer_id) | difficulty u32 BE | nonce u64 BE
inline Bytes header_bytes(const BlockHeader& h) {
    Bytes out;
    out.reserve(5 + 8 + 64 + 64 + 8 + 4 + h.proposer_id.size() + 4 + 8);
    append_tag(out, "VHBK1");
    append_u64_be(out, h.index);
    append_raw(out, h.prev_hash);
    append_raw(out, h.body_digest);
    append_u64_be(out, h.timestamp_us);
    append_lp_string(out, h.proposer_id);
    append_u32_be(out, h.difficulty);
    append_u64_be(out, h.nonce);
    return out;
}

inline Digest block_hash(const BlockHeader& h) {
    return sha512(header_bytes(h));
}

// SHA-512 of the concatenated tx digests, in block order. An empty tx list
// hashes the empty byte string.
inline Digest body_digest_of(const std::vector<FovTransaction>& txs) {
    Bytes concat;
    concat.reserve(txs.size() * 64);
    for (const auto& tx : txs) append_raw(concat, tx_digest(tx));
    return sha512(concat);
}

inline bool meets_difficulty(const Digest& hash, uint32_t difficulty) {
    return leading_zero_bits(hash) >= difficulty;
}

// The genesis block pins the ACL: its body_digest slot carries the digest of
// the canonical ACL bytes instead of a tx-list digest.
inline Block make_genesis(const Acl& acl) {
    Block g;
    g.header.index = 0;
    g.header.prev_hash = Digest{};
    g.header.body_digest = acl_digest(acl);
    g.header.timestamp_us = 0;
    g.header.proposer_id = kGenesisProposer;
    g.header.difficulty = 0;
    g.header.nonce = 0;
    return g;
}

struct MiningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic nonce search from zero. The returned block links to `parent`
// and its hash carries at least `difficulty` leading zero bits.
inline Block mine_block(const BlockHeader& parent, std::vector<FovTransaction> txs,
                        const std::string& proposer_id, uint64_t timestamp_us,
                        uint32_t difficulty) {
    if (difficulty > kMaxDifficulty)
        throw MiningError("difficulty above cap of 32 bits");
    Block b;
    b.header.index = parent.index + 1;
    b.header.prev_hash = block_hash(parent);
    b.header.body_digest = body_digest_of(txs);
    b.header.timestamp_us = timestamp_us;
    b.header.proposer_id = proposer_id;
    b.header.difficulty = difficulty;
    b.txs = std::move(txs);
    for (uint64_t nonce = 0;; ++nonce) {
        b.header.nonce = nonce;
        if (meets_difficulty(block_hash(b.header), difficulty)) return b;
        if (nonce == std::numeric_limits<uint64_t>::max())
            throw MiningError("nonce space exhausted");
    }
}

}  // namespace bcvh
