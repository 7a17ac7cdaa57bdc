#include "lazyc/proto/lazy_state.hpp"

#include <algorithm>
#include <cassert>

namespace lazyc::proto {

const char* proto_err_name(ProtoErr e) {
    switch (e) {
    case ProtoErr::AlreadyMember: return "AlreadyMember";
    case ProtoErr::InsufficientDeposit: return "InsufficientDeposit";
    case ProtoErr::NotMember: return "NotMember";
    case ProtoErr::Blacklisted: return "Blacklisted";
    case ProtoErr::ZeroAmount: return "ZeroAmount";
    case ProtoErr::UnknownFunction: return "UnknownFunction";
    case ProtoErr::ArgumentError: return "ArgumentError";
    case ProtoErr::InvalidPayment: return "InvalidPayment";
    case ProtoErr::LimitExceeded: return "LimitExceeded";
    case ProtoErr::CheckpointRequired: return "CheckpointRequired";
    case ProtoErr::ActiveRequestExists: return "ActiveRequestExists";
    case ProtoErr::NotOwnerOfRequest: return "NotOwnerOfRequest";
    case ProtoErr::WindowOpen: return "WindowOpen";
    case ProtoErr::WindowClosed: return "WindowClosed";
    case ProtoErr::Challenged: return "Challenged";
    case ProtoErr::AlreadyPaid: return "AlreadyPaid";
    case ProtoErr::AlreadyChallenged: return "AlreadyChallenged";
    case ProtoErr::SelfChallenge: return "SelfChallenge";
    case ProtoErr::NotWithdrawable: return "NotWithdrawable";
    case ProtoErr::DisputeInProgress: return "DisputeInProgress";
    case ProtoErr::AuctionClosed: return "AuctionClosed";
    case ProtoErr::PartyToDispute: return "PartyToDispute";
    case ProtoErr::StillOpen: return "StillOpen";
    case ProtoErr::NoBids: return "NoBids";
    case ProtoErr::NotWinner: return "NotWinner";
    case ProtoErr::OutOfOrder: return "OutOfOrder";
    case ProtoErr::PastDeadline: return "PastDeadline";
    case ProtoErr::NotTimedOut: return "NotTimedOut";
    case ProtoErr::ActiveRequest: return "ActiveRequest";
    case ProtoErr::NoClaim: return "NoClaim";
    case ProtoErr::BadDigest: return "BadDigest";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(ProtoErr code, const std::string& what) {
    throw ProtoError(code, std::string(proto_err_name(code)) + ": " + what);
}

uint64_t words_of(size_t bytes) { return (uint64_t(bytes) + 31) / 32; }

} // namespace

// ---------------------------------------------------------------- replay

std::vector<uint8_t> encode_state_preimage(const vm::Storage& storage, const vm::Balances& b) {
    ByteWriter w;
    vm::encode_storage(w, storage);
    vm::encode_balances(w, b);
    return w.take();
}

std::pair<vm::Storage, vm::Balances> decode_state_preimage(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    vm::Storage storage;
    uint32_t nslots = r.u32();
    for (uint32_t i = 0; i < nslots; ++i) {
        std::string key = r.str();
        storage.emplace(std::move(key), vm::decode_value(r));
    }
    vm::Balances b;
    uint32_t nbal = r.u32();
    for (uint32_t i = 0; i < nbal; ++i) {
        vm::Address a = vm::decode_address(r);
        U256 x = r.u256();
        b.emplace(std::move(a), x);
    }
    if (!r.done()) throw DecodeError("trailing preimage bytes");
    return {std::move(storage), std::move(b)};
}

Digest state_digest(const HashFn& hash, const vm::Storage& storage, const vm::Balances& b) {
    return hash(encode_state_preimage(storage, b));
}

ReplayResult apply_ledger_entry(const ReplayEnv& env, vm::Storage& storage, vm::Balances& b,
                                const LedgerEntry& entry) {
    ReplayResult res;
    auto charge = [&](uint64_t cost, const char* tag) {
        if (env.outer) env.outer->charge(cost, tag);
    };

    switch (entry.body.index()) {
    case 0: { // deposit
        const auto& d = entry.deposit();
        charge(env.sched->storage_write_update, "replay_deposit");
        if (!vm::credit(b, d.party, d.amount)) res.ignored = true;
        return res;
    }
    case 1: { // call request
        const auto& c = entry.call();
        charge(env.sched->storage_read, "replay_payment_guard");
        if (c.payment > vm::balance_of(b, c.party)) {
            res.ignored = true;
            return res;
        }
        auto it = env.rewritten->find(c.fname);
        if (it == env.rewritten->end())
            throw vm::InternalInvariantViolation("ledger names unknown function " + c.fname);
        const vm::BundleFn& target = it->second;

        std::vector<vm::Value> args;
        args.reserve(c.args.size() + 1);
        args.emplace_back(U256(entry.index));
        for (const auto& a : c.args) args.push_back(a);

        vm::CallEnv call_env;
        call_env.gas_limit = c.gas_limit;
        uint64_t bound = c.gas_limit;
        if (env.flat_mode) {
            // Stub schedules replay effects under the block cap; the outer
            // transaction's gas is overridden by the chain anyway.
            bound = env.flat_cap;
        } else if (env.outer && env.outer->remaining() < bound) {
            bound = env.outer->remaining();
        }
        call_env.gas_limit = bound;

        vm::VmHost host{env.sched, env.hash, env.rewritten};
        vm::ExecutionResult r = vm::execute_call(host, *target.fn, target.self, args, call_env,
                                                 storage, b, &c.snapshot, nullptr);
        res.outcome = r.outcome;
        res.gas_used = r.gas_used;
        if (!env.flat_mode && env.outer) {
            if (r.outcome == vm::Outcome::OutOfGas && bound < c.gas_limit) {
                // The transaction's own budget, not the entry's limit, ran
                // out: the whole simulate call is out of gas, nothing is
                // consumed. Replicas, which always use the entry's limit,
                // would have seen a different outcome.
                env.outer->charge(env.outer->remaining() + 1, "force_oog");
            }
            env.outer->charge(r.gas_used, "replay_call");
        }
        if (r.outcome == vm::Outcome::Success) {
            storage = std::move(r.storage_after);
            b = std::move(r.balances_after);
        } else {
            res.ignored = true; // reverted or hit the requester's own limit
        }
        return res;
    }
    case 2: { // withdraw request: debit at request time when covered
        const auto& wd = entry.withdraw();
        charge(env.sched->storage_read, "replay_withdraw_guard");
        if (vm::balance_of(b, wd.party) >= wd.amount) {
            charge(env.sched->storage_write_update, "replay_withdraw_debit");
            bool ok = vm::debit(b, wd.party, wd.amount);
            assert(ok);
            (void)ok;
            res.would_pay = true;
        } else {
            res.ignored = true;
        }
        return res;
    }
    default: // checkpoint: inert during replay
        return res;
    }
}

// ----------------------------------------------------------- construction

LazyContractState LazyContractState::deploy(std::shared_ptr<const wrap::LazyContract> program,
                                            vm::Address self) {
    LazyContractState s;
    s.rewritten = std::make_shared<std::map<std::string, vm::BundleFn>>(
        program->rewritten_table());
    s.storage = program->initial_storage();
    s.params = program->params;
    s.program = std::move(program);
    s.self = std::move(self);
    return s;
}

ReplayEnv LazyContractState::replay_env(const EntryContext& ctx) const {
    ReplayEnv env;
    env.program = program.get();
    env.rewritten = rewritten.get();
    env.sched = ctx.sched;
    env.hash = ctx.hash;
    env.outer = ctx.meter;
    env.flat_mode = ctx.sched->flat_tx_gas != 0;
    env.flat_cap = ctx.block_gas_cap;
    return env;
}

// ------------------------------------------------------------- utilities

const LedgerEntry& LazyContractState::entry_at(uint64_t index) const {
    if (index == 0 || index > ledger.size()) fail(ProtoErr::OutOfOrder, "no such ledger index");
    return ledger[index - 1];
}

LedgerEntry& LazyContractState::entry_at_mut(uint64_t index) {
    if (index == 0 || index > ledger.size()) fail(ProtoErr::OutOfOrder, "no such ledger index");
    return ledger[index - 1];
}

bool LazyContractState::is_member(const vm::Address& p) const {
    auto it = parties.find(p);
    return it != parties.end() && it->second.member;
}

uint64_t LazyContractState::latest_standing_checkpoint(uint64_t block, uint64_t ceiling) const {
    for (uint64_t i = std::min<uint64_t>(ceiling, ledger.size()); i >= 1; --i) {
        const LedgerEntry& e = ledger[i - 1];
        if (!e.is_checkpoint()) continue;
        const auto& cp = e.checkpoint();
        if (cp.challenged || cp.defeated) continue;
        if (e.block + params.window < block) return i;
    }
    return 0;
}

bool LazyContractState::withdraw_active(const vm::Address& p, uint64_t) const {
    // Any unpaid request counts: a finalizable one must be claimed before
    // the party can request again or leave.
    for (const auto& e : ledger) {
        if (!e.is_withdraw()) continue;
        const auto& wd = e.withdraw();
        if (wd.party == p && !wd.paid) return true;
    }
    return false;
}

U256 LazyContractState::expected_custody() const {
    U256 total;
    for (const auto& [p, acct] : parties) total = add_exact(total, acct.deposit_remaining);
    for (const auto& [p, c] : claims) total = add_exact(total, c);
    total = add_exact(total, forfeited_pool);
    total = add_exact(total, total_deposit_entries);
    return sub_exact(total, total_paid_withdrawals);
}

void LazyContractState::charge_common_checks(EntryContext& ctx) const {
    ctx.meter->charge(2 * ctx.sched->storage_read + ctx.sched->require_op, "entry_checks");
}

PartyAccount& LazyContractState::require_member(EntryContext& ctx) {
    auto it = parties.find(ctx.origin);
    if (it != parties.end() && it->second.blacklisted)
        fail(ProtoErr::Blacklisted, ctx.origin.label + " is blacklisted");
    if (it == parties.end() || !it->second.member)
        fail(ProtoErr::NotMember, ctx.origin.label + " has not joined");
    return it->second;
}

uint64_t LazyContractState::append_entry(EntryContext& ctx, LedgerEntry entry) {
    entry.index = ledger.size() + 1;
    entry.block = ctx.block;
    size_t bytes = encode_entry_payload(entry).size();
    ctx.meter->charge(words_of(bytes) * ctx.sched->storage_write_new +
                          ctx.sched->storage_write_update,
                      "ledger_append");
    ledger.push_back(std::move(entry));
    return ledger.size();
}

// ------------------------------------------------------------ membership

void LazyContractState::join(EntryContext& ctx) {
    charge_common_checks(ctx);
    PartyAccount& acct = parties[ctx.origin];
    if (acct.member) fail(ProtoErr::AlreadyMember, ctx.origin.label + " already joined");
    // Fresh joiners owe d; a slashed party owes the difference that makes
    // their deposit whole again.
    U256 need = sub_exact(params.deposit, acct.deposit_remaining);
    if (ctx.value != need)
        fail(ProtoErr::InsufficientDeposit,
             "join payment " + ctx.value.to_dec() + " != required " + need.to_dec());
    ctx.meter->charge(ctx.sched->storage_write_new, "member_record");
    acct.deposit_remaining = params.deposit;
    acct.member = true;
    acct.blacklisted = false;
}

Payout LazyContractState::leave(EntryContext& ctx) {
    charge_common_checks(ctx);
    PartyAccount& acct = require_member(ctx);
    if (withdraw_active(ctx.origin, ctx.block))
        fail(ProtoErr::ActiveRequest, "unfinished withdraw request");
    if (dispute) {
        bool involved = dispute->requester == ctx.origin ||
                        dispute->challenger == ctx.origin ||
                        (dispute->winner_decided && dispute->auction.winner == ctx.origin);
        if (involved) fail(ProtoErr::ActiveRequest, "party to the active dispute");
    }
    ctx.meter->charge(ctx.sched->transfer_op + ctx.sched->storage_write_update, "leave_refund");
    Payout out{ctx.origin, acct.deposit_remaining};
    acct.deposit_remaining = U256{};
    acct.member = false;
    return out;
}

// ---------------------------------------------------------------- banking

uint64_t LazyContractState::deposit_ether(EntryContext& ctx) {
    charge_common_checks(ctx);
    require_member(ctx);
    if (ctx.value.is_zero()) fail(ProtoErr::ZeroAmount, "deposit of zero");
    total_deposit_entries = add_exact(total_deposit_entries, ctx.value);
    LedgerEntry e;
    e.body = DepositEntry{ctx.origin, ctx.value};
    return append_entry(ctx, e);
}

uint64_t LazyContractState::request_call(EntryContext& ctx, const std::string& fname,
                                         uint64_t gas_limit, std::vector<vm::Value> args,
                                         const U256& payment) {
    charge_common_checks(ctx);
    require_member(ctx);

    auto qualified = program->resolve_function(fname);
    if (!qualified) fail(ProtoErr::UnknownFunction, "no function '" + fname + "'");
    const mcl::FunctionDef* fn = program->find_rewritten(*qualified);
    const mcl::GlobalsUsage& usage = *program->find_usage(*qualified);

    // Arguments are validated against the original signature (the rewritten
    // form's own leading index parameter is supplied during replay).
    if (args.size() + 1 != fn->params.size())
        fail(ProtoErr::ArgumentError, "arity mismatch for '" + fname + "'");
    for (size_t i = 0; i < args.size(); ++i)
        if (args[i].type() != fn->params[i + 1].type)
            fail(ProtoErr::ArgumentError, "argument type mismatch for '" + fname + "'");
    if (!fn->payable && !payment.is_zero())
        fail(ProtoErr::InvalidPayment, "payment to non-payable '" + fname + "'");

    ctx.meter->charge(3 * ctx.sched->storage_read, "limit_checks");
    // A request beyond the block cap could never be simulated in one block.
    if (gas_limit > ctx.block_gas_cap)
        fail(ProtoErr::LimitExceeded, "call gas beyond the block cap");
    if (params.max_gas_per_call && gas_limit > *params.max_gas_per_call)
        fail(ProtoErr::LimitExceeded, "per-call gas limit");
    if (params.max_total_gas_per_user &&
        gas_spent_per_user[ctx.origin] + gas_limit > *params.max_total_gas_per_user)
        fail(ProtoErr::LimitExceeded, "per-user total gas limit");
    if (params.max_call_count && call_count >= *params.max_call_count)
        fail(ProtoErr::LimitExceeded, "call count limit");
    if (params.checkpoint_interval && *params.checkpoint_interval > 0 &&
        (call_count + 1) % *params.checkpoint_interval == 0) {
        if (ledger.empty() || !ledger.back().is_checkpoint())
            fail(ProtoErr::CheckpointRequired,
                 "a checkpoint must precede this call request");
    }

    CallRequestEntry c;
    c.party = ctx.origin;
    c.fname = *qualified;
    c.gas_limit = gas_limit;
    c.args = std::move(args);
    c.payment = payment;
    if (usage.block_number) c.snapshot.block_number = ctx.block;
    if (usage.msg_sender) c.snapshot.msg_sender = ctx.origin;
    if (usage.msg_value) c.snapshot.msg_value = payment;

    ctx.meter->charge(2 * ctx.sched->storage_write_update, "call_counters");
    gas_spent_per_user[ctx.origin] += gas_limit;
    call_count += 1;

    LedgerEntry e;
    e.body = std::move(c);
    return append_entry(ctx, e);
}

// ------------------------------------------------------------ withdrawal

uint64_t LazyContractState::request_withdraw(EntryContext& ctx, const U256& amount) {
    charge_common_checks(ctx);
    require_member(ctx);
    if (amount.is_zero()) fail(ProtoErr::ZeroAmount, "withdraw of zero");
    ctx.meter->charge(ctx.sched->storage_read, "active_request_check");
    if (withdraw_active(ctx.origin, ctx.block))
        fail(ProtoErr::ActiveRequestExists, "previous request still pending");
    WithdrawRequestEntry wd;
    wd.party = ctx.origin;
    wd.amount = amount;
    LedgerEntry e;
    e.body = std::move(wd);
    return append_entry(ctx, e);
}

Payout LazyContractState::finalize_withdraw(EntryContext& ctx, uint64_t j) {
    charge_common_checks(ctx);
    LedgerEntry& e = entry_at_mut(j);
    if (!e.is_withdraw()) fail(ProtoErr::NotWithdrawable, "entry is not a withdraw request");
    auto& wd = e.withdraw();
    if (wd.party != ctx.origin) fail(ProtoErr::NotOwnerOfRequest, "not the requester");
    if (wd.paid) fail(ProtoErr::AlreadyPaid, "already paid");
    if (wd.challenged) fail(ProtoErr::Challenged, "request is under challenge");
    // Strictly after the window: the boundary block still accepts challenges.
    if (ctx.block <= e.block + params.window)
        fail(ProtoErr::WindowOpen, "challenge window still open");
    ctx.meter->charge(ctx.sched->transfer_op + ctx.sched->storage_write_update,
                      "withdraw_payout");
    wd.paid = true;
    total_paid_withdrawals = add_exact(total_paid_withdrawals, wd.amount);
    return Payout{ctx.origin, wd.amount};
}

// --------------------------------------------------------------- dispute

void LazyContractState::challenge(EntryContext& ctx, uint64_t j) {
    charge_common_checks(ctx);
    require_member(ctx);
    LedgerEntry& e = entry_at_mut(j);

    vm::Address author;
    if (e.is_withdraw()) {
        auto& wd = e.withdraw();
        if (wd.paid) fail(ProtoErr::AlreadyPaid, "withdraw already paid");
        if (wd.challenged) fail(ProtoErr::AlreadyChallenged, "already challenged");
        author = wd.party;
    } else if (e.is_checkpoint()) {
        auto& cp = e.checkpoint();
        if (cp.challenged || cp.defeated) fail(ProtoErr::AlreadyChallenged, "already challenged");
        author = cp.party;
    } else {
        fail(ProtoErr::NotWithdrawable, "only withdrawals and checkpoints can be challenged");
    }
    if (author == ctx.origin) fail(ProtoErr::SelfChallenge, "cannot challenge own entry");
    if (ctx.block > e.block + params.window)
        fail(ProtoErr::WindowClosed, "challenge window has closed");
    // An entry at or below the cursor was already replayed on-chain during
    // an earlier dispute; its outcome is settled and public.
    if (j <= sim_cursor)
        fail(ProtoErr::WindowClosed, "entry already settled by an on-chain replay");
    // Disputes resolve one at a time; a fresh challenge waits for the floor.
    if (dispute) fail(ProtoErr::DisputeInProgress, "another dispute is unresolved");

    ctx.meter->charge(2 * ctx.sched->storage_write_update + 2 * ctx.sched->storage_write_new,
                      "challenge_record");
    if (e.is_withdraw()) {
        auto& wd = e.withdraw();
        wd.challenged = true;
        wd.challenger = ctx.origin;
        wd.challenge_block = ctx.block;
    } else {
        auto& cp = e.checkpoint();
        cp.challenged = true;
        cp.challenger = ctx.origin;
        cp.challenge_block = ctx.block;
    }

    Dispute d;
    d.index = j;
    d.requester = author;
    d.challenger = ctx.origin;
    d.auction.dispute_index = j;
    d.auction.open_from = ctx.block;
    d.auction.open_until = ctx.block + params.window;
    // A checkpoint standing right now truncates the replay; the winner must
    // seed its preimage with the first simulate call.
    uint64_t cp = latest_standing_checkpoint(ctx.block, j == 0 ? 0 : j - 1);
    d.replay_from = std::max(sim_cursor, cp);
    d.seeded = d.replay_from == sim_cursor;
    dispute = std::move(d);
}

void LazyContractState::bid(EntryContext& ctx, uint64_t j, const U256& price) {
    charge_common_checks(ctx);
    require_member(ctx);
    if (!dispute || dispute->index != j) fail(ProtoErr::AuctionClosed, "no open auction");
    AuctionState& a = dispute->auction;
    if (ctx.block < a.open_from || ctx.block > a.open_until || dispute->winner_decided)
        fail(ProtoErr::AuctionClosed, "bidding window closed");
    if (ctx.origin == dispute->requester || ctx.origin == dispute->challenger)
        fail(ProtoErr::PartyToDispute, "disputing parties cannot bid");
    if (price.is_zero()) fail(ProtoErr::ZeroAmount, "zero bid price");
    ctx.meter->charge(2 * ctx.sched->storage_write_new, "bid_record");
    a.bids.push_back(BidRecord{ctx.origin, price, ctx.block, ctx.tx_id});
}

vm::Address LazyContractState::close_auction(uint64_t j, uint64_t current_block) {
    if (!dispute || dispute->index != j) fail(ProtoErr::AuctionClosed, "no such auction");
    if (dispute->winner_decided) return *dispute->auction.winner;
    AuctionState& a = dispute->auction;
    if (current_block <= a.open_until) fail(ProtoErr::StillOpen, "bidding still open");
    if (a.bids.empty()) fail(ProtoErr::NoBids, "no bids; dispute stalls");
    // Smallest price wins; ties broken by earlier block, then earlier tx.
    const BidRecord* best = &a.bids[0];
    for (const BidRecord& bd : a.bids) {
        if (bd.price < best->price ||
            (bd.price == best->price &&
             (bd.block < best->block || (bd.block == best->block && bd.tx_id < best->tx_id))))
            best = &bd;
    }
    a.winner = best->party;
    a.winner_price = best->price;
    dispute->winner_decided = true;
    dispute->deadline = a.open_until + params.window;
    dispute->initiators.push_back(InitiatorShare{best->party, best->price});
    gamma[best->party]; // materialize at zero
    return best->party;
}

StepReceipt LazyContractState::simulate(EntryContext& ctx, uint64_t k,
                                        std::span<const uint8_t> preimage) {
    charge_common_checks(ctx);
    require_member(ctx);
    if (!dispute) fail(ProtoErr::OutOfOrder, "no dispute to simulate");
    if (!dispute->winner_decided) close_auction(dispute->index, ctx.block);
    if (ctx.origin != *dispute->auction.winner) fail(ProtoErr::NotWinner, "not the initiator");
    if (ctx.block > dispute->deadline) fail(ProtoErr::PastDeadline, "deadline missed");

    if (!dispute->seeded) {
        // Resume from the standing checkpoint: the initiator supplies the
        // (storage, b) preimage, the contract only trusts its hash.
        if (k != dispute->replay_from + 1)
            fail(ProtoErr::OutOfOrder, "replay resumes after the standing checkpoint");
        const LedgerEntry& cp_entry = entry_at(dispute->replay_from);
        if (preimage.empty()) fail(ProtoErr::BadDigest, "checkpoint preimage required");
        ctx.meter->charge(words_of(preimage.size()) * ctx.sched->hash_op, "preimage_hash");
        Digest got = (*ctx.hash)(preimage);
        if (got != cp_entry.checkpoint().state_hash)
            fail(ProtoErr::BadDigest, "preimage does not match the checkpoint");
        ctx.meter->charge(words_of(preimage.size()) * ctx.sched->storage_write_update,
                          "preimage_load");
        auto [st, bal] = decode_state_preimage(preimage);
        storage = std::move(st);
        b = std::move(bal);
        sim_cursor = dispute->replay_from;
        dispute->seeded = true;
    } else if (k != sim_cursor + 1) {
        fail(ProtoErr::OutOfOrder, "entries replay in order");
    }
    if (k > dispute->index) fail(ProtoErr::OutOfOrder, "replay ends at the disputed entry");

    const LedgerEntry& entry = entry_at(k);
    ReplayEnv env = replay_env(ctx);
    ReplayResult r = apply_ledger_entry(env, storage, b, entry);

    ctx.meter->charge(2 * ctx.sched->storage_write_update, "cursor_gamma");
    sim_cursor = k;
    dispute->deadline = ctx.block + params.window;

    StepReceipt receipt;
    receipt.index = k;
    receipt.kind = entry.kind_name();
    receipt.ignored = r.ignored;
    receipt.call_outcome = r.outcome;
    receipt.call_gas = r.gas_used;

    if (k == dispute->index) {
        receipt.verdict_reached = true;
        if (entry.is_withdraw()) {
            dispute->head_honest = r.would_pay;
        } else {
            // Checkpoint dispute: honest iff the recorded digest matches the
            // replayed state.
            const auto& cp = entry.checkpoint();
            std::vector<uint8_t> bytes = encode_state_preimage(storage, b);
            ctx.meter->charge(words_of(bytes.size()) * ctx.sched->hash_op, "verdict_hash");
            dispute->head_honest = (*ctx.hash)(bytes) == cp.state_hash;
        }
    }
    return receipt;
}

void LazyContractState::credit_gamma(const vm::Address& initiator, uint64_t gas) {
    gamma[initiator] += gas;
}

void LazyContractState::settle_verdict(const EntryContext& ctx) {
    assert(dispute && dispute->head_honest.has_value());
    bool requester_honest = *dispute->head_honest;
    vm::Address dishonest = requester_honest ? dispute->challenger : dispute->requester;

    // Pay each initiator's gamma * bid price from the dishonest deposit, in
    // winning order, until the pot runs dry.
    PartyAccount& acct = parties[dishonest];
    U256 pot = acct.deposit_remaining;
    for (const InitiatorShare& share : dispute->initiators) {
        uint64_t g = 0;
        if (auto it = gamma.find(share.party); it != gamma.end()) g = it->second;
        if (g == 0) continue;
        U256 owed;
        if (!checked_mul(U256(g), share.price, owed)) owed = pot; // cap absurd products
        U256 take = owed > pot ? pot : owed;
        claims[share.party] = add_exact(claims[share.party], take);
        pot = sub_exact(pot, take);
        if (pot.is_zero()) break;
    }
    acct.deposit_remaining = pot;
    acct.member = false;
    acct.blacklisted = true;

    LedgerEntry& e = entry_at_mut(dispute->index);
    if (e.is_withdraw()) {
        auto& wd = e.withdraw();
        if (requester_honest) {
            // The withdrawal survives: clear the challenge so the requester
            // can collect after the (long past) window.
            wd.challenged = false;
        } else {
            // Voided: the flag blocks any payout, the ledger keeps the
            // original amount (entries are immutable beyond their flags).
            wd.paid = true;
        }
    } else {
        auto& cp = e.checkpoint();
        if (requester_honest) cp.challenged = false;
        else cp.defeated = true;
    }

    auction_history.push_back(dispute->auction);
    gamma.clear();
    dispute.reset();
    (void)ctx;
}

void LazyContractState::report_timeout(EntryContext& ctx, uint64_t j) {
    charge_common_checks(ctx);
    require_member(ctx);
    if (!dispute || dispute->index != j) fail(ProtoErr::NotTimedOut, "no such dispute");
    if (!dispute->winner_decided) close_auction(j, ctx.block);
    if (ctx.block <= dispute->deadline) fail(ProtoErr::NotTimedOut, "deadline not passed");

    vm::Address sleeper = *dispute->auction.winner;
    ctx.meter->charge(2 * ctx.sched->storage_write_update + 2 * ctx.sched->storage_write_new,
                      "timeout_slash");
    PartyAccount& acct = parties[sleeper];
    // Full forfeiture; the pool keeps custody balanced since nothing leaves
    // the chain.
    forfeited_pool = add_exact(forfeited_pool, acct.deposit_remaining);
    acct.deposit_remaining = U256{};
    acct.member = false;
    acct.blacklisted = true;

    auction_history.push_back(dispute->auction);
    AuctionState fresh;
    fresh.dispute_index = j;
    fresh.open_from = ctx.block;
    fresh.open_until = ctx.block + params.window;
    dispute->auction = std::move(fresh);
    dispute->winner_decided = false;
    dispute->deadline = 0;
}

// ------------------------------------------------------------ checkpoint

uint64_t LazyContractState::add_checkpoint(EntryContext& ctx, const Digest& digest) {
    charge_common_checks(ctx);
    require_member(ctx);
    CheckpointEntry cp;
    cp.party = ctx.origin;
    cp.state_hash = digest;
    LedgerEntry e;
    e.body = std::move(cp);
    return append_entry(ctx, e);
}

// ----------------------------------------------------------------- claims

Payout LazyContractState::get_gas_payment(EntryContext& ctx) {
    charge_common_checks(ctx);
    auto it = claims.find(ctx.origin);
    if (it == claims.end() || it->second.is_zero())
        fail(ProtoErr::NoClaim, "no settled claim");
    ctx.meter->charge(ctx.sched->transfer_op + ctx.sched->storage_write_update, "claim_payout");
    Payout out{ctx.origin, it->second};
    total_paid_claims = add_exact(total_paid_claims, it->second);
    claims.erase(it);
    return out;
}

// ------------------------------------------------------------ canonical

void LazyContractState::encode_state(ByteWriter& w) const {
    w.u32((uint32_t)ledger.size());
    for (const auto& e : ledger) {
        auto payload = encode_entry_payload(e);
        w.bytes(payload);
        if (e.is_withdraw()) {
            const auto& wd = e.withdraw();
            w.u8((wd.challenged ? 1 : 0) | (wd.paid ? 2 : 0));
            w.u64(wd.challenge_block.value_or(0));
        } else if (e.is_checkpoint()) {
            const auto& cp = e.checkpoint();
            w.u8((cp.challenged ? 1 : 0) | (cp.defeated ? 2 : 0));
            w.u64(cp.challenge_block.value_or(0));
        }
    }
    w.u32((uint32_t)parties.size());
    for (const auto& [p, acct] : parties) {
        vm::encode_address(w, p);
        w.u256(acct.deposit_remaining);
        w.u8((acct.member ? 1 : 0) | (acct.blacklisted ? 2 : 0));
    }
    vm::encode_balances(w, b);
    vm::encode_storage(w, storage);
    w.u64(sim_cursor);
    w.u8(dispute.has_value() ? 1 : 0);
    if (dispute) {
        w.u64(dispute->index);
        vm::encode_address(w, dispute->requester);
        vm::encode_address(w, dispute->challenger);
        w.u64(dispute->deadline);
        w.u8(dispute->winner_decided ? 1 : 0);
        w.u32((uint32_t)dispute->auction.bids.size());
        for (const auto& bd : dispute->auction.bids) {
            vm::encode_address(w, bd.party);
            w.u256(bd.price);
            w.u64(bd.block);
            w.u64(bd.tx_id);
        }
    }
    w.u32((uint32_t)claims.size());
    for (const auto& [p, c] : claims) {
        vm::encode_address(w, p);
        w.u256(c);
    }
    w.u256(forfeited_pool);
    w.u32((uint32_t)gas_spent_per_user.size());
    for (const auto& [p, g] : gas_spent_per_user) {
        vm::encode_address(w, p);
        w.u64(g);
    }
    w.u64(call_count);
    w.u32((uint32_t)gamma.size());
    for (const auto& [p, g] : gamma) {
        vm::encode_address(w, p);
        w.u64(g);
    }
    w.u256(total_deposit_entries);
    w.u256(total_paid_withdrawals);
    w.u256(total_paid_claims);
}

} // namespace lazyc::proto
