#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "bcvh/bytes.hpp"
#include "bcvh/crypto.hpp"
#include "bcvh/tx.hpp"

namespace bcvh {

enum class Role : uint8_t { Member = 0, Observer = 1 };

inline const char* role_name(Role r) {
    return r == Role::Member ? "member" : "observer";
}

// A robot's key material. The private seed never travels; the simulator
// confines each identity to its owning node.
struct RobotIdentity {
    std::string robot_id;
    PublicKey public_key{};
    PrivateSeed private_key{};
    Role role = Role::Member;
};

// Deterministic Ed25519 identity from a 32-byte seed.
inline RobotIdentity keygen(const std::string& robot_id, const PrivateSeed& seed,
                            Role role = Role::Member) {
    RobotIdentity id;
    id.robot_id = robot_id;
    id.private_key = seed;
    id.public_key = ed25519_public_from_seed(seed);
    id.role = role;
    return id;
}

struct AclEntry {
    PublicKey public_key{};
    Role role = Role::Member;

    bool operator==(const AclEntry&) const = default;
};

// The shared access control list, pinned by the genesis block. Static for
// the lifetime of a chain; only member entries may submit, propose or vote.
struct Acl {
    std::map<std::string, AclEntry> entries;  // robot_id -> entry
    uint32_t version = 1;

    bool operator==(const Acl&) const = default;

    const AclEntry* find(const std::string& robot_id) const {
        auto it = entries.find(robot_id);
        return it == entries.end() ? nullptr : &it->second;
    }

    bool is_member(const std::string& robot_id) const {
        const AclEntry* e = find(robot_id);
        return e != nullptr && e->role == Role::Member;
    }

    size_t member_count() const {
        size_t n = 0;
        for (const auto& [id, e] : entries)
            if (e.role == Role::Member) ++n;
        return n;
    }

    // Member ids in lexicographic order; round-robin proposing indexes this.
    std::vector<std::string> sorted_members() const {
        std::vector<std::string> out;
        for (const auto& [id, e] : entries)
            if (e.role == Role::Member) out.push_back(id);
        return out;
    }
};

// Canonical ACL bytes: "VHACL" | version u32 BE | count u32 BE |
// per entry in id order: lp(id) | 32 raw pubkey bytes | role byte.
inline Bytes canonical_acl_bytes(const Acl& acl) {
    Bytes out;
    append_tag(out, "VHACL");
    append_u32_be(out, acl.version);
    append_u32_be(out, static_cast<uint32_t>(acl.entries.size()));
    for (const auto& [id, entry] : acl.entries) {
        append_lp_string(out, id);
        append_raw(out, entry.public_key);
        out.push_back(static_cast<uint8_t>(entry.role));
    }
    return out;
}

inline Digest acl_digest(const Acl& acl) {
    return sha512(canonical_acl_bytes(acl));
}

// Signs the SHA-512 digest of the signing bytes. Refuses to sign for a
// foreign robot id.
inline FovTransaction sign_tx(const RobotIdentity& identity, FovTransaction tx) {
    if (identity.robot_id != tx.robot_id)
        throw std::invalid_argument("signer " + identity.robot_id +
                                    " does not own tx from " + tx.robot_id);
    Digest digest = sha512(tx_signing_bytes(tx));
    tx.signature = ed25519_sign(identity.private_key, digest);
    return tx;
}

enum class TxVerdict { Ok, UnknownId, WrongRole, BadSignature };

inline const char* tx_verdict_name(TxVerdict v) {
    switch (v) {
        case TxVerdict::Ok: return "ok";
        case TxVerdict::UnknownId: return "unknown-id";
        case TxVerdict::WrongRole: return "wrong-role";
        case TxVerdict::BadSignature: return "bad-signature";
    }
    return "?";
}

// Spoof rejection: the robot must be an ACL member and the signature must
// verify against its registered key.
inline TxVerdict verify_tx(const FovTransaction& tx, const Acl& acl) {
    const AclEntry* entry = acl.find(tx.robot_id);
    if (entry == nullptr) return TxVerdict::UnknownId;
    if (entry->role != Role::Member) return TxVerdict::WrongRole;
    Digest digest = sha512(tx_signing_bytes(tx));
    if (!ed25519_verify(entry->public_key, digest, tx.signature))
        return TxVerdict::BadSignature;
    return TxVerdict::Ok;
}

// Proof-of-delivery record. The receiver signs over the digest of the
// delivered message plus the delivery metadata.
struct DeliveryReceipt {
    Digest message_digest{};
    std::string sender_id;
    std::string receiver_id;
    uint64_t receive_time_us = 0;
    Signature receiver_signature{};

    bool operator==(const DeliveryReceipt&) const = default;
};

inline Bytes receipt_signing_bytes(const DeliveryReceipt& r) {
    Bytes out;
    append_tag(out, "VHRC1");
    append_raw(out, r.message_digest);
    append_lp_string(out, r.sender_id);
    append_lp_string(out, r.receiver_id);
    append_u64_be(out, r.receive_time_us);
    return out;
}

inline DeliveryReceipt issue_receipt(const RobotIdentity& receiver,
                                     const Digest& message_digest,
                                     const std::string& sender_id,
                                     uint64_t receive_time_us) {
    DeliveryReceipt r;
    r.message_digest = message_digest;
    r.sender_id = sender_id;
    r.receiver_id = receiver.robot_id;
    r.receive_time_us = receive_time_us;
    r.receiver_signature =
        ed25519_sign(receiver.private_key, sha512(receipt_signing_bytes(r)));
    return r;
}

inline bool verify_receipt(const DeliveryReceipt& r, const Acl& acl) {
    const AclEntry* entry = acl.find(r.receiver_id);
    if (entry == nullptr) return false;
    return ed25519_verify(entry->public_key, sha512(receipt_signing_bytes(r)),
                          r.receiver_signature);
}

}  // namespace bcvh
