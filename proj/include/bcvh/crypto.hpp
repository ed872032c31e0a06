#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "bcvh/bytes.hpp"

namespace bcvh {

using Digest = std::array<uint8_t, 64>;      // SHA-512
using PublicKey = std::array<uint8_t, 32>;   // Ed25519
using PrivateSeed = std::array<uint8_t, 32>; // Ed25519 seed
using Signature = std::array<uint8_t, 64>;

inline void crypto_init() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("sodium_init failed");
}

inline Digest sha512(std::span<const uint8_t> data) {
    crypto_init();
    Digest out{};
    crypto_hash_sha512(out.data(), data.data(), data.size());
    return out;
}

inline Digest sha512(const Bytes& data) {
    return sha512(std::span<const uint8_t>(data.data(), data.size()));
}

// Number of leading zero bits of a digest, MSB of byte 0 first.
inline uint32_t leading_zero_bits(const Digest& d) {
    uint32_t n = 0;
    for (uint8_t byte : d) {
        if (byte == 0) {
            n += 8;
            continue;
        }
        for (int bit = 7; bit >= 0; --bit) {
            if (byte & (1u << bit)) return n;
            ++n;
        }
    }
    return n;
}

// Big-endian lexicographic order; used for the fork-choice tie break.
inline int compare_digests(const Digest& a, const Digest& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

inline PublicKey ed25519_public_from_seed(const PrivateSeed& seed) {
    crypto_init();
    std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
    crypto_sign_seed_keypair(pk.data(), sk.data(), seed.data());
    PublicKey out{};
    std::copy(pk.begin(), pk.end(), out.begin());
    return out;
}

inline Signature ed25519_sign(const PrivateSeed& seed, std::span<const uint8_t> message) {
    crypto_init();
    std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
    std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
    crypto_sign_seed_keypair(pk.data(), sk.data(), seed.data());
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
    return sig;
}

inline bool ed25519_verify(const PublicKey& pub, std::span<const uint8_t> message,
                           const Signature& sig) {
    crypto_init();
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(),
                                       pub.data()) == 0;
}

}  // namespace bcvh
