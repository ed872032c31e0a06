#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bcvh {

using Bytes = std::vector<uint8_t>;

// All multi-byte integers on the wire are big-endian.
inline void append_u32_be(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void append_u64_be(Bytes& out, uint64_t v) {
    append_u32_be(out, static_cast<uint32_t>(v >> 32));
    append_u32_be(out, static_cast<uint32_t>(v));
}

// Length-prefixed UTF-8: u32 BE byte count, then the raw bytes.
inline void append_lp_string(Bytes& out, std::string_view s) {
    append_u32_be(out, static_cast<uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

inline void append_raw(Bytes& out, std::span<const uint8_t> data) {
    out.insert(out.end(), data.begin(), data.end());
}

// Wire-format tag, e.g. append_tag(out, "VHTX1"). The trailing NUL of the
// literal is not written.
template <size_t N>
void append_tag(Bytes& out, const char (&tag)[N]) {
    out.insert(out.end(), tag, tag + N - 1);
}

inline std::string to_hex(std::span<const uint8_t> data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0x0f]);
    }
    return s;
}

inline std::optional<Bytes> from_hex(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = nibble(s[i]);
        int lo = nibble(s[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

template <size_t N>
std::optional<std::array<uint8_t, N>> fixed_from_hex(std::string_view s) {
    auto raw = from_hex(s);
    if (!raw || raw->size() != N) return std::nullopt;
    std::array<uint8_t, N> out{};
    std::copy(raw->begin(), raw->end(), out.begin());
    return out;
}

}  // namespace bcvh
