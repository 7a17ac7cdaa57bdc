#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>

namespace lazyc {

using Digest = std::array<uint8_t, 32>;

Digest sha256(std::span<const uint8_t> data);

// Pluggable 256-bit hash over canonical value encodings. The simulator's
// stand-in for keccak256; tests may substitute stubs.
using HashFn = std::function<Digest(std::span<const uint8_t>)>;

inline HashFn default_hash() {
    return [](std::span<const uint8_t> data) { return sha256(data); };
}

} // namespace lazyc
