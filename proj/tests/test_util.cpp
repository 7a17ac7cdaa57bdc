#include "lazyc/encoding.hpp"
#include "lazyc/sha256.hpp"
#include "lazyc/u256.hpp"

#include <gtest/gtest.h>

using namespace lazyc;

namespace {

U256 parse_or_die(const char* s) {
    auto v = U256::parse(s);
    EXPECT_TRUE(v.has_value()) << s;
    return *v;
}

TEST(U256, BasicArithmetic) {
    U256 a(7), b(5), r;
    ASSERT_TRUE(checked_add(a, b, r));
    EXPECT_EQ(r, U256(12));
    ASSERT_TRUE(checked_sub(a, b, r));
    EXPECT_EQ(r, U256(2));
    ASSERT_TRUE(checked_mul(a, b, r));
    EXPECT_EQ(r, U256(35));
    ASSERT_TRUE(checked_div(a, b, r));
    EXPECT_EQ(r, U256(1));
    ASSERT_TRUE(checked_mod(a, b, r));
    EXPECT_EQ(r, U256(2));
}

TEST(U256, OverflowDetection) {
    U256 max = U256::from_limbs(~0ULL, ~0ULL, ~0ULL, ~0ULL);
    U256 r;
    EXPECT_FALSE(checked_add(max, U256(1), r));
    EXPECT_FALSE(checked_sub(U256(0), U256(1), r));
    EXPECT_FALSE(checked_mul(max, U256(2), r));
    EXPECT_FALSE(checked_div(U256(1), U256(0), r));
    EXPECT_FALSE(checked_mod(U256(1), U256(0), r));
    ASSERT_TRUE(checked_add(max, U256(0), r));
    EXPECT_EQ(r, max);
}

TEST(U256, CrossLimbCarries) {
    U256 x = U256::from_limbs(~0ULL, 0, 0, 0);
    U256 r;
    ASSERT_TRUE(checked_add(x, U256(1), r));
    EXPECT_EQ(r, U256::from_limbs(0, 1, 0, 0));
    ASSERT_TRUE(checked_sub(r, U256(1), r));
    EXPECT_EQ(r, x);
    // (2^64 - 1)^2 = 2^128 - 2^65 + 1
    ASSERT_TRUE(checked_mul(x, x, r));
    EXPECT_EQ(r, U256::from_limbs(1, ~0ULL - 1, 0, 0));
}

TEST(U256, AgainstNativeWideArithmetic) {
    // Random 64-bit operands: compare against __int128 reference results.
    uint64_t seed = 12345;
    Prng rng(seed);
    for (int i = 0; i < 2000; ++i) {
        uint64_t a = rng.next(), b = rng.next();
        U256 r;
        ASSERT_TRUE(checked_add(U256(a), U256(b), r));
        unsigned __int128 s = (unsigned __int128)a + b;
        EXPECT_EQ(r.v[0], (uint64_t)s);
        EXPECT_EQ(r.v[1], (uint64_t)(s >> 64));

        ASSERT_TRUE(checked_mul(U256(a), U256(b), r));
        unsigned __int128 m = (unsigned __int128)a * b;
        EXPECT_EQ(r.v[0], (uint64_t)m);
        EXPECT_EQ(r.v[1], (uint64_t)(m >> 64));

        if (b != 0) {
            ASSERT_TRUE(checked_div(U256(a), U256(b), r));
            EXPECT_EQ(r, U256(a / b));
            ASSERT_TRUE(checked_mod(U256(a), U256(b), r));
            EXPECT_EQ(r, U256(a % b));
        }
    }
}

TEST(U256, DivModIdentity) {
    // a == q*b + r with r < b, over random 256-bit operands.
    Prng rng(99);
    for (int i = 0; i < 500; ++i) {
        U256 a = U256::from_limbs(rng.next(), rng.next(), rng.next(), rng.next());
        U256 b = U256::from_limbs(rng.next(), rng.next(), i % 3 ? 0 : rng.next(), 0);
        if (b.is_zero()) continue;
        U256 q, r, qb, back;
        ASSERT_TRUE(checked_div(a, b, q));
        ASSERT_TRUE(checked_mod(a, b, r));
        ASSERT_TRUE(r < b);
        ASSERT_TRUE(checked_mul(q, b, qb));
        ASSERT_TRUE(checked_add(qb, r, back));
        EXPECT_EQ(back, a);
    }
}

TEST(U256, DecimalRoundTrip) {
    const char* cases[] = {
        "0", "1", "10", "999", "18446744073709551615", "18446744073709551616",
        "340282366920938463463374607431768211455",
        "115792089237316195423570985008687907853269984665640564039457584007913129639935",
    };
    for (const char* c : cases) {
        EXPECT_EQ(parse_or_die(c).to_dec(), c);
    }
    EXPECT_FALSE(U256::parse("115792089237316195423570985008687907853269984665640564039457584007913129639936").has_value());
    EXPECT_FALSE(U256::parse("12a").has_value());
    EXPECT_FALSE(U256::parse("").has_value());
}

TEST(U256, HexParseAndBytes) {
    U256 x = parse_or_die("0xdeadbeef00112233");
    EXPECT_EQ(x, U256(0xdeadbeef00112233ULL));
    EXPECT_EQ(x.to_hex(), "0xdeadbeef00112233");
    auto bytes = x.to_bytes();
    EXPECT_EQ(bytes[31], 0x33);
    EXPECT_EQ(bytes[24], 0xde);
    EXPECT_EQ(U256::from_bytes(std::span<const uint8_t, 32>(bytes.data(), 32)), x);
}

TEST(Sha256, KnownVectors) {
    auto hex = [](const Digest& d) {
        std::string out;
        for (uint8_t b : d) {
            out.push_back("0123456789abcdef"[b >> 4]);
            out.push_back("0123456789abcdef"[b & 0xF]);
        }
        return out;
    };
    EXPECT_EQ(hex(sha256({})),
              "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    const char* abc = "abc";
    EXPECT_EQ(hex(sha256(std::span<const uint8_t>((const uint8_t*)abc, 3))),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // 56 bytes: forces the two-block padding path.
    std::string s(56, 'a');
    EXPECT_EQ(hex(sha256(std::span<const uint8_t>((const uint8_t*)s.data(), s.size()))),
              "b35439a4ac6f0948b6d6f9e3c6af0f5f590ce20f1bde7090ef7970686ec6738a");
}

TEST(Encoding, RoundTrip) {
    ByteWriter w;
    w.u8(7);
    w.u32(123456);
    w.u64(0xfeedfacecafebeefULL);
    w.u256(parse_or_die("987654321987654321987654321"));
    w.str("hello");
    std::vector<uint8_t> blob{1, 2, 3};
    w.bytes(blob);

    ByteReader r(w.data());
    EXPECT_EQ(r.u8(), 7);
    EXPECT_EQ(r.u32(), 123456u);
    EXPECT_EQ(r.u64(), 0xfeedfacecafebeefULL);
    EXPECT_EQ(r.u256(), parse_or_die("987654321987654321987654321"));
    EXPECT_EQ(r.str(), "hello");
    EXPECT_EQ(r.bytes(), blob);
    EXPECT_TRUE(r.done());
}

TEST(Encoding, TruncationThrows) {
    ByteWriter w;
    w.u64(1);
    ByteReader r(w.data());
    r.u32();
    EXPECT_THROW(r.u64(), DecodeError);
}

TEST(Prng, Deterministic) {
    Prng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

} // namespace
