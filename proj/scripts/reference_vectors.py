#!/usr/bin/env python3
"""Independent reference encoder for the bcvh wire formats.

Hand-assembles the canonical byte layouts in pure Python (hashlib +
the `cryptography` package) and prints the expected byte strings,
digests, keys, signatures and the difficulty-8 nonce for the reference
fixtures. The values printed here are frozen into the C++ unit tests;
any drift between this script and the library is a conformance bug.

Usage: python3 scripts/reference_vectors.py
"""

import hashlib
import struct

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    PublicFormat,
)


def lp(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


def u32(v: int) -> bytes:
    return struct.pack(">I", v)


def u64(v: int) -> bytes:
    return struct.pack(">Q", v)


def tx_bytes(robot_id, seq, t_us, sectors, signature=None) -> bytes:
    out = b"VHTX1" + lp(robot_id) + u64(seq) + u64(t_us)
    assert len(sectors) == 6
    for sector in sectors:
        ids = sorted(sector)
        out += u32(len(ids))
        for i in ids:
            out += lp(i)
    if signature is not None:
        assert len(signature) == 64
        out += signature
    return out


def header_bytes(index, prev, body, t_us, proposer, difficulty, nonce) -> bytes:
    assert len(prev) == 64 and len(body) == 64
    return (
        b"VHBK1"
        + u64(index)
        + prev
        + body
        + u64(t_us)
        + lp(proposer)
        + u32(difficulty)
        + u64(nonce)
    )


def acl_bytes(entries) -> bytes:
    # entries: {robot_id: (pubkey32, role)} with role "member"|"observer"
    out = b"VHACL" + u32(1) + u32(len(entries))
    for rid in sorted(entries):
        pub, role = entries[rid]
        assert len(pub) == 32
        out += lp(rid) + pub + bytes([0 if role == "member" else 1])
    return out


def sha512(b: bytes) -> bytes:
    return hashlib.sha512(b).digest()


def keypair(seed: bytes):
    priv = Ed25519PrivateKey.from_private_bytes(seed)
    pub = priv.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    return priv, pub


def sign_digest(seed: bytes, message: bytes) -> bytes:
    priv, _ = keypair(seed)
    return priv.sign(message)


def leading_zero_bits(digest: bytes) -> int:
    n = 0
    for byte in digest:
        if byte == 0:
            n += 8
            continue
        for bit in range(7, -1, -1):
            if byte & (1 << bit):
                return n
            n += 1
    return n


def main():
    empty = [set(), set(), set(), set(), set(), set()]

    # --- canonical tx byte vectors -------------------------------------
    r1_unsigned = tx_bytes("R1", 1, 0, empty)
    print(f"r1_unsigned_len = {len(r1_unsigned)}")
    print(f"r1_unsigned_hex = {r1_unsigned.hex()}")

    r1_zero_sig = tx_bytes("R1", 1, 0, empty, b"\x00" * 64)
    print(f"r1_zero_sig_len = {len(r1_zero_sig)}")
    print(f"r1_zero_sig_sha512 = {sha512(r1_zero_sig).hex()}")

    r2_l7 = tx_bytes("R2", 3, 1000, [{"L7"}, set(), set(), set(), set(), set()])
    print(f"r2_l7_len = {len(r2_l7)}")
    print(f"r2_l7_hex = {r2_l7.hex()}")

    # --- ed25519 --------------------------------------------------------
    zero_seed = b"\x00" * 32
    _, zero_pub = keypair(zero_seed)
    print(f"zero_seed_pub = {zero_pub.hex()}")

    # signature of the unsigned R1 tx digest under the zero seed
    r1_digest = sha512(r1_unsigned)
    sig = sign_digest(zero_seed, r1_digest)
    print(f"r1_zero_seed_sig = {sig.hex()}")

    # --- reference ACL / genesis / block 1 ------------------------------
    seeds = {"R1": b"\x01" * 32, "R2": b"\x02" * 32, "R3": b"\x03" * 32}
    entries = {}
    for rid, seed in seeds.items():
        _, pub = keypair(seed)
        entries[rid] = (pub, "member")
        print(f"pub_{rid} = {pub.hex()}")

    acl = acl_bytes(entries)
    acl_digest = sha512(acl)
    print(f"acl_digest = {acl_digest.hex()}")

    genesis = header_bytes(0, b"\x00" * 64, acl_digest, 0, "GENESIS", 0, 0)
    genesis_hash = sha512(genesis)
    print(f"genesis_hash = {genesis_hash.hex()}")

    # block 1: one tx from R1, mined at difficulty 8
    view = [{"L12"}, set(), set(), set(), set(), set()]
    unsigned = tx_bytes("R1", 1, 1000, view)
    tx_sig = sign_digest(seeds["R1"], sha512(unsigned))
    signed = tx_bytes("R1", 1, 1000, view, tx_sig)
    tx1_digest = sha512(signed)
    print(f"block1_tx_digest = {tx1_digest.hex()}")

    body = sha512(tx1_digest)
    nonce = 0
    while True:
        h = sha512(header_bytes(1, genesis_hash, body, 2000, "R1", 8, nonce))
        if leading_zero_bits(h) >= 8:
            break
        nonce += 1
    print(f"block1_nonce = {nonce}")
    print(f"block1_hash = {h.hex()}")


if __name__ == "__main__":
    main()
