#pragma once

#include "lazyc/proto/lazy_state.hpp"

namespace lazyc::party {

struct GapInLedger : std::runtime_error {
    explicit GapInLedger(const std::string& what) : std::runtime_error(what) {}
};

struct ReplicaBehind : std::runtime_error {
    explicit ReplicaBehind(const std::string& what) : std::runtime_error(what) {}
};

// One party's eagerly-executed off-chain copy of the wrapped contract:
// storage, every L-balance, and the next ledger index to consume. Two
// replicas fed the same prefix are bitwise identical.
struct Replica {
    vm::Address owner;
    std::shared_ptr<const wrap::LazyContract> program;
    std::shared_ptr<const std::map<std::string, vm::BundleFn>> rewritten;
    vm::GasSchedule sched;
    HashFn hash;

    vm::Storage storage_view;
    vm::Balances balances_view;
    uint64_t next_index = 1;
    // State preimage at each applied checkpoint, kept so this party can
    // seed a truncated replay if it wins an initiator auction.
    std::map<uint64_t, std::vector<uint8_t>> checkpoint_preimages;

    static Replica create(vm::Address owner, std::shared_ptr<const wrap::LazyContract> program,
                          const vm::GasSchedule& sched, HashFn hash);

    // Applies the entry with exactly the on-chain replay semantics, gas-free
    // for the party. Throws GapInLedger unless entry.index == next_index.
    proto::ReplayResult apply_entry(const proto::LedgerEntry& entry);

    // True iff the requested amount exceeds the requester's balance in this
    // replica's view. Requires the replica to have applied everything up to
    // the request (ReplicaBehind otherwise).
    bool detect_fraud(const proto::LedgerEntry& withdraw_entry) const;

    // True iff a checkpoint's digest disagrees with this replica's state.
    bool detect_bad_checkpoint(const proto::LedgerEntry& checkpoint_entry) const;

    // Digest of the current (storage, balances) view.
    Digest digest() const;

    bool flat_mode = false;
    uint64_t flat_cap = 30'000'000;
};

} // namespace lazyc::party
