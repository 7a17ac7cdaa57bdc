#include "lazyc/vm/value.hpp"

#include <sstream>

namespace lazyc::vm {

Value Value::default_of(mcl::McType t) {
    switch (t) {
    case mcl::McType::Uint: return Value(U256{});
    case mcl::McType::Address: return Value(Address{});
    case mcl::McType::Bool: return Value(false);
    case mcl::McType::Map: return Value(MapValue{});
    }
    return Value(U256{});
}

mcl::McType Value::type() const {
    switch (v.index()) {
    case 0: return mcl::McType::Uint;
    case 1: return mcl::McType::Address;
    case 2: return mcl::McType::Bool;
    default: return mcl::McType::Map;
    }
}

bool Value::is_default() const {
    switch (v.index()) {
    case 0: return as_uint().is_zero();
    case 1: return as_address().empty();
    case 2: return !as_bool();
    default: return as_map().empty();
    }
}

U256 balance_of(const Balances& b, const Address& a) {
    auto it = b.find(a);
    return it == b.end() ? U256{} : it->second;
}

bool credit(Balances& b, const Address& a, const U256& amount) {
    if (amount.is_zero()) return true;
    U256 cur = balance_of(b, a);
    U256 next;
    if (!checked_add(cur, amount, next)) return false;
    b[a] = next;
    return true;
}

bool debit(Balances& b, const Address& a, const U256& amount) {
    if (amount.is_zero()) return true;
    U256 cur = balance_of(b, a);
    U256 next;
    if (!checked_sub(cur, amount, next)) return false;
    if (next.is_zero()) b.erase(a);
    else b[a] = next;
    return true;
}

void encode_address(ByteWriter& w, const Address& a) { w.str(a.label); }

Address decode_address(ByteReader& r) { return Address{r.str()}; }

void encode_value(ByteWriter& w, const Value& val) {
    switch (val.v.index()) {
    case 0:
        w.u8(1);
        w.u256(val.as_uint());
        break;
    case 1:
        w.u8(2);
        encode_address(w, val.as_address());
        break;
    case 2:
        w.u8(3);
        w.u8(val.as_bool() ? 1 : 0);
        break;
    default: {
        w.u8(4);
        const auto& m = val.as_map();
        w.u32((uint32_t)m.size());
        for (const auto& [k, v] : m) {
            encode_address(w, k);
            w.u256(v);
        }
        break;
    }
    }
}

Value decode_value(ByteReader& r) {
    uint8_t tag = r.u8();
    switch (tag) {
    case 1: return Value(r.u256());
    case 2: return Value(decode_address(r));
    case 3: return Value(r.u8() != 0);
    case 4: {
        uint32_t n = r.u32();
        MapValue m;
        for (uint32_t i = 0; i < n; ++i) {
            Address k = decode_address(r);
            U256 v = r.u256();
            m.emplace(std::move(k), v);
        }
        return Value(std::move(m));
    }
    default: throw DecodeError("bad value tag");
    }
}

void encode_storage(ByteWriter& w, const Storage& s) {
    w.u32((uint32_t)s.size());
    for (const auto& [k, v] : s) {
        w.str(k);
        encode_value(w, v);
    }
}

void encode_balances(ByteWriter& w, const Balances& b) {
    w.u32((uint32_t)b.size());
    for (const auto& [a, x] : b) {
        encode_address(w, a);
        w.u256(x);
    }
}

std::string to_string(const Value& v) {
    switch (v.v.index()) {
    case 0: return v.as_uint().to_dec();
    case 1: return "@" + v.as_address().label;
    case 2: return v.as_bool() ? "true" : "false";
    default: {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (const auto& [k, x] : v.as_map()) {
            if (!first) os << ", ";
            first = false;
            os << "@" << k.label << ": " << x.to_dec();
        }
        os << "}";
        return os.str();
    }
    }
}

} // namespace lazyc::vm
