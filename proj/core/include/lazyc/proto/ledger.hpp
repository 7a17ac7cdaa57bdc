#pragma once

#include "lazyc/encoding.hpp"
#include "lazyc/sha256.hpp"
#include "lazyc/vm/interp.hpp"
#include "lazyc/vm/value.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lazyc::proto {

struct DepositEntry {
    vm::Address party;
    U256 amount;
};

struct CallRequestEntry {
    vm::Address party;
    std::string fname; // qualified "Contract.fn"
    uint64_t gas_limit = 0;
    std::vector<vm::Value> args;
    U256 payment; // moved from the caller's b[.] to the contract's
    vm::GlobalsSnapshot snapshot;
};

struct WithdrawRequestEntry {
    vm::Address party;
    U256 amount;
    bool challenged = false;
    bool paid = false;
    std::optional<vm::Address> challenger;
    std::optional<uint64_t> challenge_block;
};

struct CheckpointEntry {
    vm::Address party;
    Digest state_hash{}; // digest of (storage, b) before this entry
    bool challenged = false;
    bool defeated = false; // dispute proved the digest wrong
    std::optional<vm::Address> challenger;
    std::optional<uint64_t> challenge_block;
};

// One record in the wrapper's on-chain ledger. Indices are 1-based, dense
// and append-only; only the withdraw/checkpoint flags above ever mutate.
struct LedgerEntry {
    uint64_t index = 0;
    uint64_t block = 0; // block that mined the append
    std::variant<DepositEntry, CallRequestEntry, WithdrawRequestEntry, CheckpointEntry> body;

    const char* kind_name() const;

    bool is_deposit() const { return std::holds_alternative<DepositEntry>(body); }
    bool is_call() const { return std::holds_alternative<CallRequestEntry>(body); }
    bool is_withdraw() const { return std::holds_alternative<WithdrawRequestEntry>(body); }
    bool is_checkpoint() const { return std::holds_alternative<CheckpointEntry>(body); }

    const DepositEntry& deposit() const { return std::get<DepositEntry>(body); }
    const CallRequestEntry& call() const { return std::get<CallRequestEntry>(body); }
    const WithdrawRequestEntry& withdraw() const { return std::get<WithdrawRequestEntry>(body); }
    WithdrawRequestEntry& withdraw() { return std::get<WithdrawRequestEntry>(body); }
    const CheckpointEntry& checkpoint() const { return std::get<CheckpointEntry>(body); }
    CheckpointEntry& checkpoint() { return std::get<CheckpointEntry>(body); }

    vm::Address author() const;
};

void encode_snapshot(ByteWriter& w, const vm::GlobalsSnapshot& s);
vm::GlobalsSnapshot decode_snapshot(ByteReader& r);

// Canonical bytes of an entry's immutable payload: sized for append gas and
// hashed into traces. Mutable dispute flags are excluded.
std::vector<uint8_t> encode_entry_payload(const LedgerEntry& e);

} // namespace lazyc::proto
