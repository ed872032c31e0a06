#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "bcvh/bytes.hpp"
#include "bcvh/crypto.hpp"
#include "bcvh/view.hpp"

namespace bcvh {

// Thrown when a robot or landmark id exceeds the 64-byte cap.
struct EncodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A robot's signed, sequence-numbered panoramic view summary. seq is a
// per-robot monotone counter starting at 1; replay protection rejects any
// seq at or below the last committed one.
struct FovTransaction {
    std::string robot_id;
    uint64_t seq = 0;
    uint64_t timestamp_us = 0;
    PanoramicView view;
    Signature signature{};

    bool operator==(const FovTransaction&) const = default;
};

enum class WithSignature : bool { No = false, Yes = true };

// Deterministic byte layout, identical across implementations:
//   "VHTX1" | lp(robot_id) | seq u64 BE | timestamp_us u64 BE |
//   6 x ( count u32 BE, then lp(id) for each id in lexicographic order ) |
//   [ 64 raw signature bytes ]
inline Bytes canonical_tx_bytes(const FovTransaction& tx, WithSignature with_sig) {
    if (tx.robot_id.empty() || tx.robot_id.size() > kMaxIdBytes)
        throw EncodingError("robot id empty or exceeds 64 bytes: " + tx.robot_id);
    Bytes out;
    out.reserve(64 + tx.view.landmark_count() * 16);
    append_tag(out, "VHTX1");
    append_lp_string(out, tx.robot_id);
    append_u64_be(out, tx.seq);
    append_u64_be(out, tx.timestamp_us);
    for (const auto& sector : tx.view.sectors) {
        append_u32_be(out, static_cast<uint32_t>(sector.size()));
        for (const auto& id : sector) {
            if (id.empty() || id.size() > kMaxIdBytes)
                throw EncodingError("landmark id empty or exceeds 64 bytes: " + id);
            append_lp_string(out, id);
        }
    }
    if (with_sig == WithSignature::Yes) append_raw(out, tx.signature);
    return out;
}

// The bytes a robot signs: everything but the signature itself.
inline Bytes tx_signing_bytes(const FovTransaction& tx) {
    return canonical_tx_bytes(tx, WithSignature::No);
}

// SHA-512 over the canonical bytes, signature included.
inline Digest tx_digest(const FovTransaction& tx) {
    return sha512(canonical_tx_bytes(tx, WithSignature::Yes));
}

}  // namespace bcvh
