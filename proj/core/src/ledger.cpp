#include "lazyc/proto/ledger.hpp"

namespace lazyc::proto {

const char* LedgerEntry::kind_name() const {
    switch (body.index()) {
    case 0: return "deposit";
    case 1: return "call_request";
    case 2: return "withdraw_request";
    default: return "checkpoint";
    }
}

vm::Address LedgerEntry::author() const {
    switch (body.index()) {
    case 0: return deposit().party;
    case 1: return call().party;
    case 2: return withdraw().party;
    default: return checkpoint().party;
    }
}

void encode_snapshot(ByteWriter& w, const vm::GlobalsSnapshot& s) {
    uint8_t bits = (s.block_number ? 1 : 0) | (s.msg_sender ? 2 : 0) | (s.msg_value ? 4 : 0);
    w.u8(bits);
    if (s.block_number) w.u64(*s.block_number);
    if (s.msg_sender) vm::encode_address(w, *s.msg_sender);
    if (s.msg_value) w.u256(*s.msg_value);
}

vm::GlobalsSnapshot decode_snapshot(ByteReader& r) {
    vm::GlobalsSnapshot s;
    uint8_t bits = r.u8();
    if (bits & 1) s.block_number = r.u64();
    if (bits & 2) s.msg_sender = vm::decode_address(r);
    if (bits & 4) s.msg_value = r.u256();
    return s;
}

std::vector<uint8_t> encode_entry_payload(const LedgerEntry& e) {
    ByteWriter w;
    w.u64(e.index);
    w.u64(e.block);
    w.u8((uint8_t)e.body.index());
    switch (e.body.index()) {
    case 0: {
        const auto& d = e.deposit();
        vm::encode_address(w, d.party);
        w.u256(d.amount);
        break;
    }
    case 1: {
        const auto& c = e.call();
        vm::encode_address(w, c.party);
        w.str(c.fname);
        w.u64(c.gas_limit);
        w.u32((uint32_t)c.args.size());
        for (const auto& a : c.args) vm::encode_value(w, a);
        w.u256(c.payment);
        encode_snapshot(w, c.snapshot);
        break;
    }
    case 2: {
        const auto& wd = e.withdraw();
        vm::encode_address(w, wd.party);
        w.u256(wd.amount);
        break;
    }
    default: {
        const auto& cp = e.checkpoint();
        vm::encode_address(w, cp.party);
        w.raw(std::span<const uint8_t>(cp.state_hash.data(), cp.state_hash.size()));
        break;
    }
    }
    return w.take();
}

} // namespace lazyc::proto
