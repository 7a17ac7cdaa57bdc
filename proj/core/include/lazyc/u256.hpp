#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lazyc {

// Unsigned 256-bit integer with explicit overflow reporting. Arithmetic
// helpers return false instead of wrapping so callers can turn overflow
// into a revert. Limbs are little-endian (v[0] holds the least significant
// 64 bits); the canonical byte encoding is 32 bytes big-endian.
struct U256 {
    std::array<uint64_t, 4> v{0, 0, 0, 0};

    constexpr U256() = default;
    constexpr U256(uint64_t x) : v{x, 0, 0, 0} {}

    static U256 from_limbs(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
        U256 r;
        r.v = {a, b, c, d};
        return r;
    }

    bool is_zero() const { return (v[0] | v[1] | v[2] | v[3]) == 0; }
    bool fits_u64() const { return (v[1] | v[2] | v[3]) == 0; }
    uint64_t low64() const { return v[0]; }

    friend bool operator==(const U256&, const U256&) = default;

    std::array<uint8_t, 32> to_bytes() const;
    static U256 from_bytes(std::span<const uint8_t, 32> bytes);

    std::string to_dec() const;
    std::string to_hex() const; // 0x-prefixed, no leading zeros

    // Parses decimal or 0x-hex. Returns nullopt on malformed input or
    // values exceeding 256 bits.
    static std::optional<U256> parse(std::string_view text);
};

// Each op returns true on success and stores into out; false means the
// mathematical result does not fit in 256 bits (or division by zero).
bool checked_add(const U256& a, const U256& b, U256& out);
bool checked_sub(const U256& a, const U256& b, U256& out);
bool checked_mul(const U256& a, const U256& b, U256& out);
bool checked_div(const U256& a, const U256& b, U256& out);
bool checked_mod(const U256& a, const U256& b, U256& out);

int compare(const U256& a, const U256& b); // -1, 0, 1

inline bool operator<(const U256& a, const U256& b) { return compare(a, b) < 0; }
inline bool operator<=(const U256& a, const U256& b) { return compare(a, b) <= 0; }
inline bool operator>(const U256& a, const U256& b) { return compare(a, b) > 0; }
inline bool operator>=(const U256& a, const U256& b) { return compare(a, b) >= 0; }

// Saturation-free helpers for trusted callers (asserts on overflow).
U256 add_exact(const U256& a, const U256& b);
U256 sub_exact(const U256& a, const U256& b);

} // namespace lazyc
