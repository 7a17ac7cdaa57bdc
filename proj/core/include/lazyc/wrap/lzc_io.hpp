#pragma once

#include "lazyc/encoding.hpp"
#include "lazyc/wrap/lazy_contract.hpp"

#include <vector>

namespace lazyc::wrap {

// Binary .lzc container: magic "LZC1", deployment params, the original
// contracts and their rewritten forms as serialized ASTs. Byte-stable:
// identical inputs serialize to identical bytes.
std::vector<uint8_t> serialize_lzc(const LazyContract& lc);

// Throws DecodeError on malformed input, WrapError if the embedded
// rewritten functions do not match a fresh rewrite of the originals.
LazyContract deserialize_lzc(std::span<const uint8_t> bytes);

} // namespace lazyc::wrap
