#pragma once

#include "lazyc/u256.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lazyc {

// Canonical byte layout shared by transaction payloads, ledger entries,
// state digests and the .lzc container: u8/u64 fixed-width big-endian,
// u256 as 32 bytes big-endian, strings and blobs length-prefixed with u32.
// Every writer in the project goes through this type so identical values
// always produce identical bytes.
class ByteWriter {
public:
    void u8(uint8_t x) { buf_.push_back(x); }
    void u32(uint32_t x) {
        for (int i = 3; i >= 0; --i) buf_.push_back((uint8_t)(x >> (8 * i)));
    }
    void u64(uint64_t x) {
        for (int i = 7; i >= 0; --i) buf_.push_back((uint8_t)(x >> (8 * i)));
    }
    void u256(const U256& x) {
        auto b = x.to_bytes();
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void str(std::string_view s) {
        u32((uint32_t)s.size());
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void bytes(std::span<const uint8_t> b) {
        u32((uint32_t)b.size());
        buf_.insert(buf_.end(), b.begin(), b.end());
    }
    void raw(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    std::vector<uint8_t> buf_;
};

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        auto b = take(4);
        uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x = (x << 8) | b[i];
        return x;
    }
    uint64_t u64() {
        auto b = take(8);
        uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x = (x << 8) | b[i];
        return x;
    }
    U256 u256() {
        auto b = take(32);
        return U256::from_bytes(std::span<const uint8_t, 32>(b.data(), 32));
    }
    std::string str() {
        uint32_t n = u32();
        auto b = take(n);
        return std::string(b.begin(), b.end());
    }
    std::vector<uint8_t> bytes() {
        uint32_t n = u32();
        auto b = take(n);
        return std::vector<uint8_t>(b.begin(), b.end());
    }
    bool done() const { return pos_ == data_.size(); }
    size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const uint8_t> take(size_t n) {
        if (pos_ + n > data_.size()) throw DecodeError("truncated input");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

// splitmix64: the deterministic PRNG used by workload generation and
// randomized tests. Stable across platforms, unlike std distributions.
struct Prng {
    uint64_t state;

    explicit Prng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Modulo bias is irrelevant for scenario generation.
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
    uint64_t in_range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }
    bool chance(uint64_t num, uint64_t den) { return below(den) < num; }
};

} // namespace lazyc
