#include "lazyc/u256.hpp"

#include <cassert>
#include <stdexcept>

namespace lazyc {

bool checked_add(const U256& a, const U256& b, U256& out) {
    U256 r;
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 s = (unsigned __int128)a.v[i] + b.v[i] + carry;
        r.v[i] = (uint64_t)s;
        carry = s >> 64;
    }
    if (carry != 0) return false;
    out = r;
    return true;
}

bool checked_sub(const U256& a, const U256& b, U256& out) {
    U256 r;
    uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 d = (unsigned __int128)a.v[i] - b.v[i] - borrow;
        r.v[i] = (uint64_t)d;
        borrow = (d >> 64) != 0 ? 1 : 0;
    }
    if (borrow != 0) return false;
    out = r;
    return true;
}

bool checked_mul(const U256& a, const U256& b, U256& out) {
    uint64_t prod[8] = {0};
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 carry = 0;
        for (int j = 0; j < 4; ++j) {
            unsigned __int128 cur =
                (unsigned __int128)a.v[i] * b.v[j] + prod[i + j] + carry;
            prod[i + j] = (uint64_t)cur;
            carry = cur >> 64;
        }
        prod[i + 4] = (uint64_t)carry;
    }
    if ((prod[4] | prod[5] | prod[6] | prod[7]) != 0) return false;
    out.v = {prod[0], prod[1], prod[2], prod[3]};
    return true;
}

int compare(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.v[i] < b.v[i]) return -1;
        if (a.v[i] > b.v[i]) return 1;
    }
    return 0;
}

namespace {

int highest_bit(const U256& x) {
    for (int i = 3; i >= 0; --i) {
        if (x.v[i] != 0) return i * 64 + (63 - __builtin_clzll(x.v[i]));
    }
    return -1;
}

bool get_bit(const U256& x, int bit) {
    return (x.v[bit / 64] >> (bit % 64)) & 1;
}

void shl1(U256& x) {
    uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
        uint64_t nc = x.v[i] >> 63;
        x.v[i] = (x.v[i] << 1) | carry;
        carry = nc;
    }
}

void set_bit(U256& x, int bit) { x.v[bit / 64] |= uint64_t(1) << (bit % 64); }

// Restoring binary long division; slow but simple and exact.
void divmod(const U256& a, const U256& b, U256& q, U256& r) {
    q = U256{};
    r = U256{};
    int top = highest_bit(a);
    for (int bit = top; bit >= 0; --bit) {
        shl1(r);
        if (get_bit(a, bit)) r.v[0] |= 1;
        if (compare(r, b) >= 0) {
            U256 nr;
            bool ok = checked_sub(r, b, nr);
            assert(ok);
            (void)ok;
            r = nr;
            set_bit(q, bit);
        }
    }
}

} // namespace

bool checked_div(const U256& a, const U256& b, U256& out) {
    if (b.is_zero()) return false;
    U256 q, r;
    divmod(a, b, q, r);
    out = q;
    return true;
}

bool checked_mod(const U256& a, const U256& b, U256& out) {
    if (b.is_zero()) return false;
    U256 q, r;
    divmod(a, b, q, r);
    out = r;
    return true;
}

U256 add_exact(const U256& a, const U256& b) {
    U256 r;
    if (!checked_add(a, b, r)) throw std::overflow_error("u256 add overflow");
    return r;
}

U256 sub_exact(const U256& a, const U256& b) {
    U256 r;
    if (!checked_sub(a, b, r)) throw std::underflow_error("u256 sub underflow");
    return r;
}

std::array<uint8_t, 32> U256::to_bytes() const {
    std::array<uint8_t, 32> out{};
    for (int i = 0; i < 4; ++i) {
        uint64_t limb = v[3 - i];
        for (int j = 0; j < 8; ++j) {
            out[i * 8 + j] = (uint8_t)(limb >> (56 - 8 * j));
        }
    }
    return out;
}

U256 U256::from_bytes(std::span<const uint8_t, 32> bytes) {
    U256 r;
    for (int i = 0; i < 4; ++i) {
        uint64_t limb = 0;
        for (int j = 0; j < 8; ++j) {
            limb = (limb << 8) | bytes[i * 8 + j];
        }
        r.v[3 - i] = limb;
    }
    return r;
}

std::string U256::to_dec() const {
    if (is_zero()) return "0";
    U256 x = *this;
    std::string digits;
    const U256 ten(10);
    while (!x.is_zero()) {
        U256 q, r;
        divmod(x, ten, q, r);
        digits.push_back(char('0' + r.v[0]));
        x = q;
    }
    return std::string(digits.rbegin(), digits.rend());
}

std::string U256::to_hex() const {
    if (is_zero()) return "0x0";
    std::string out = "0x";
    bool started = false;
    for (int i = 3; i >= 0; --i) {
        for (int nib = 15; nib >= 0; --nib) {
            unsigned d = (v[i] >> (nib * 4)) & 0xF;
            if (!started && d == 0) continue;
            started = true;
            out.push_back("0123456789abcdef"[d]);
        }
    }
    return out;
}

std::optional<U256> U256::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    U256 acc;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        for (char c : text.substr(2)) {
            unsigned d;
            if (c >= '0' && c <= '9') d = unsigned(c - '0');
            else if (c >= 'a' && c <= 'f') d = unsigned(c - 'a') + 10;
            else if (c >= 'A' && c <= 'F') d = unsigned(c - 'A') + 10;
            else return std::nullopt;
            U256 shifted;
            if (!checked_mul(acc, U256(16), shifted)) return std::nullopt;
            if (!checked_add(shifted, U256(d), acc)) return std::nullopt;
        }
        return acc;
    }
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        U256 shifted;
        if (!checked_mul(acc, U256(10), shifted)) return std::nullopt;
        if (!checked_add(shifted, U256(unsigned(c - '0')), acc)) return std::nullopt;
    }
    return acc;
}

} // namespace lazyc
