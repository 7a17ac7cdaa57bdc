#include "lazyc/party/replica.hpp"

namespace lazyc::party {

Replica Replica::create(vm::Address owner, std::shared_ptr<const wrap::LazyContract> program,
                        const vm::GasSchedule& sched, HashFn hash) {
    Replica r;
    r.owner = std::move(owner);
    r.rewritten =
        std::make_shared<std::map<std::string, vm::BundleFn>>(program->rewritten_table());
    r.storage_view = program->initial_storage();
    r.program = std::move(program);
    r.sched = sched;
    r.hash = std::move(hash);
    r.flat_mode = sched.flat_tx_gas != 0;
    return r;
}

proto::ReplayResult Replica::apply_entry(const proto::LedgerEntry& entry) {
    if (entry.index != next_index)
        throw GapInLedger("replica of " + owner.label + " expected index " +
                          std::to_string(next_index) + ", got " + std::to_string(entry.index));
    proto::ReplayEnv env;
    env.program = program.get();
    env.rewritten = rewritten.get();
    env.sched = &sched;
    env.hash = &hash;
    env.outer = nullptr;
    env.flat_mode = flat_mode;
    env.flat_cap = flat_cap;
    if (entry.is_checkpoint())
        checkpoint_preimages[entry.index] =
            proto::encode_state_preimage(storage_view, balances_view);
    proto::ReplayResult res = proto::apply_ledger_entry(env, storage_view, balances_view, entry);
    next_index += 1;
    return res;
}

bool Replica::detect_fraud(const proto::LedgerEntry& entry) const {
    if (!entry.is_withdraw()) return false;
    if (next_index != entry.index)
        throw ReplicaBehind("replica at " + std::to_string(next_index) +
                            " cannot judge entry " + std::to_string(entry.index));
    const auto& wd = entry.withdraw();
    return vm::balance_of(balances_view, wd.party) < wd.amount;
}

bool Replica::detect_bad_checkpoint(const proto::LedgerEntry& entry) const {
    if (!entry.is_checkpoint()) return false;
    if (next_index != entry.index)
        throw ReplicaBehind("replica at " + std::to_string(next_index) +
                            " cannot judge entry " + std::to_string(entry.index));
    return entry.checkpoint().state_hash != digest();
}

Digest Replica::digest() const {
    return proto::state_digest(hash, storage_view, balances_view);
}

} // namespace lazyc::party
