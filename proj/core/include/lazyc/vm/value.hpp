#pragma once

#include "lazyc/encoding.hpp"
#include "lazyc/mcl/ast.hpp"
#include "lazyc/u256.hpp"

#include <compare>
#include <map>
#include <string>
#include <variant>

namespace lazyc::vm {

// Addresses are opaque labels: party names, contract names, or hex literal
// spellings. No cryptographic identity in the simulator.
struct Address {
    std::string label;

    Address() = default;
    explicit Address(std::string l) : label(std::move(l)) {}

    bool empty() const { return label.empty(); }
    auto operator<=>(const Address&) const = default;
};

using MapValue = std::map<Address, U256>;

// Runtime value of an MCL expression or storage slot. Map slots never hold
// zero-valued entries: writing zero erases the key, so equal contents are
// always bitwise-equal containers.
struct Value {
    std::variant<U256, Address, bool, MapValue> v;

    Value() : v(U256{}) {}
    explicit Value(U256 x) : v(std::move(x)) {}
    explicit Value(Address a) : v(std::move(a)) {}
    explicit Value(bool b) : v(b) {}
    explicit Value(MapValue m) : v(std::move(m)) {}

    static Value default_of(mcl::McType t);
    mcl::McType type() const;

    const U256& as_uint() const { return std::get<U256>(v); }
    const Address& as_address() const { return std::get<Address>(v); }
    bool as_bool() const { return std::get<bool>(v); }
    const MapValue& as_map() const { return std::get<MapValue>(v); }
    MapValue& as_map() { return std::get<MapValue>(v); }

    // Zero uint, empty address, false, or empty map.
    bool is_default() const;

    friend bool operator==(const Value&, const Value&) = default;
};

// Contract storage. Keys are qualified "Contract.var" names; std::map keeps
// the canonical encoding order-stable.
using Storage = std::map<std::string, Value>;

// On-chain account balances or the wrapper's virtual b[.] balances.
// Zero-valued entries are erased on write (see credit/debit helpers).
using Balances = std::map<Address, U256>;

U256 balance_of(const Balances& b, const Address& a);
// Returns false on overflow/underflow and leaves b untouched.
bool credit(Balances& b, const Address& a, const U256& amount);
bool debit(Balances& b, const Address& a, const U256& amount);

void encode_value(ByteWriter& w, const Value& val);
Value decode_value(ByteReader& r);

void encode_address(ByteWriter& w, const Address& a);
Address decode_address(ByteReader& r);

void encode_storage(ByteWriter& w, const Storage& s);
void encode_balances(ByteWriter& w, const Balances& b);

// Human-readable form for traces and reports.
std::string to_string(const Value& v);

} // namespace lazyc::vm
