#pragma once

#include "lazyc/proto/ledger.hpp"
#include "lazyc/vm/gas.hpp"
#include "lazyc/wrap/lazy_contract.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace lazyc::proto {

enum class ProtoErr : uint8_t {
    AlreadyMember,
    InsufficientDeposit,
    NotMember,
    Blacklisted,
    ZeroAmount,
    UnknownFunction,
    ArgumentError,
    InvalidPayment,
    LimitExceeded,
    CheckpointRequired,
    ActiveRequestExists,
    NotOwnerOfRequest,
    WindowOpen,
    WindowClosed,
    Challenged,
    AlreadyPaid,
    AlreadyChallenged,
    SelfChallenge,
    NotWithdrawable,
    DisputeInProgress,
    AuctionClosed,
    PartyToDispute,
    StillOpen,
    NoBids,
    NotWinner,
    OutOfOrder,
    PastDeadline,
    NotTimedOut,
    ActiveRequest,
    NoClaim,
    BadDigest,
};

const char* proto_err_name(ProtoErr e);

// Rejection of a protocol entry point; the enclosing transaction reverts.
struct ProtoError : std::runtime_error {
    ProtoErr code;
    ProtoError(ProtoErr code, const std::string& what)
        : std::runtime_error(what), code(code) {}
};

struct PartyAccount {
    U256 deposit_remaining;
    bool member = false;
    bool blacklisted = false;
};

struct BidRecord {
    vm::Address party;
    U256 price; // currency per gas unit the bidder charges for simulating
    uint64_t block = 0;
    uint64_t tx_id = 0;
};

struct AuctionState {
    uint64_t dispute_index = 0;
    uint64_t open_from = 0;  // first block accepting bids (inclusive)
    uint64_t open_until = 0; // last block accepting bids (inclusive)
    std::vector<BidRecord> bids;
    std::optional<vm::Address> winner;
    U256 winner_price;
};

struct InitiatorShare {
    vm::Address party;
    U256 price; // the bid price their work is reimbursed at
};

struct Dispute {
    uint64_t index = 0; // challenged ledger index j
    vm::Address requester;
    vm::Address challenger;
    AuctionState auction; // current round; reopened after a timeout
    bool winner_decided = false;
    uint64_t deadline = 0;  // next simulate must land at block <= deadline
    uint64_t replay_from = 0; // cursor the replay starts from (standing checkpoint)
    bool seeded = false;      // checkpoint preimage verified and loaded
    std::vector<InitiatorShare> initiators; // in winning order
    std::optional<bool> head_honest; // set by simulate(j): author was honest
};

struct StepReceipt {
    uint64_t index = 0;
    const char* kind = "";
    bool ignored = false;
    vm::Outcome call_outcome = vm::Outcome::Success;
    uint64_t call_gas = 0;
    bool verdict_reached = false;
};

struct Payout {
    vm::Address to;
    U256 amount;
};

// Transaction-scoped context handed down by the chain.
struct EntryContext {
    uint64_t block = 0;
    uint64_t tx_id = 0;
    vm::Address origin;
    U256 value; // currency attached to the transaction
    vm::GasMeter* meter = nullptr;
    const vm::GasSchedule* sched = nullptr;
    const HashFn* hash = nullptr;
    uint64_t block_gas_cap = 30'000'000;
};

// Environment for replaying ledger entries; shared between the on-chain
// simulation and the parties' off-chain replicas so both apply bit-equal
// semantics.
struct ReplayEnv {
    const wrap::LazyContract* program = nullptr;
    const std::map<std::string, vm::BundleFn>* rewritten = nullptr;
    const vm::GasSchedule* sched = nullptr;
    const HashFn* hash = nullptr;
    vm::GasMeter* outer = nullptr; // simulate's native meter; null off-chain
    bool flat_mode = false;        // stub schedules replay under the cap
    uint64_t flat_cap = 30'000'000;
};

struct ReplayResult {
    bool ignored = false;   // guard skipped the entry's effect
    bool would_pay = false; // withdraw entry had sufficient balance
    vm::Outcome outcome = vm::Outcome::Success;
    uint64_t gas_used = 0;  // inner metered gas for call entries
};

// Applies one ledger entry to (storage, b). Deposit credits, call requests
// run the rewritten function under the requester's gas limit, withdraw
// requests debit immediately when covered, checkpoints are inert.
ReplayResult apply_ledger_entry(const ReplayEnv& env, vm::Storage& storage, vm::Balances& b,
                                const LedgerEntry& entry);

// Canonical (storage, b) preimage and its digest, as committed by
// checkpoints and verified when an initiator seeds a replay.
std::vector<uint8_t> encode_state_preimage(const vm::Storage& storage, const vm::Balances& b);
std::pair<vm::Storage, vm::Balances> decode_state_preimage(std::span<const uint8_t> bytes);
Digest state_digest(const HashFn& hash, const vm::Storage& storage, const vm::Balances& b);

// The wrapper's full on-chain state. Entry points throw ProtoError on
// rejection; the chain executes them on a copy and commits on success, so
// handlers may mutate freely.
struct LazyContractState {
    std::shared_ptr<const wrap::LazyContract> program;
    std::shared_ptr<const std::map<std::string, vm::BundleFn>> rewritten; // into *program
    vm::Address self; // the wrapper's own chain address (custody account)
    wrap::LazyParams params;

    std::vector<LedgerEntry> ledger; // ledger[i] has index i+1
    std::map<vm::Address, PartyAccount> parties;
    vm::Balances b;       // authoritative at sim_cursor
    vm::Storage storage;  // authoritative at sim_cursor
    uint64_t sim_cursor = 0;
    std::optional<Dispute> dispute;
    std::vector<AuctionState> auction_history; // closed rounds, for reporting
    std::map<vm::Address, U256> claims;        // settled initiator payments
    U256 forfeited_pool;                       // timed-out initiators' deposits
    std::map<vm::Address, uint64_t> gas_spent_per_user;
    uint64_t call_count = 0;
    std::map<vm::Address, uint64_t> gamma; // gas fronted per initiator, active dispute

    // Running sums for the custody audit.
    U256 total_deposit_entries;
    U256 total_paid_withdrawals;
    U256 total_paid_claims;

    static LazyContractState deploy(std::shared_ptr<const wrap::LazyContract> program,
                                    vm::Address self);

    // --- transaction entry points ---
    void join(EntryContext& ctx);
    uint64_t deposit_ether(EntryContext& ctx);
    uint64_t request_call(EntryContext& ctx, const std::string& fname, uint64_t gas_limit,
                          std::vector<vm::Value> args, const U256& payment);
    uint64_t request_withdraw(EntryContext& ctx, const U256& amount);
    Payout finalize_withdraw(EntryContext& ctx, uint64_t j);
    void challenge(EntryContext& ctx, uint64_t j);
    void bid(EntryContext& ctx, uint64_t j, const U256& price);
    StepReceipt simulate(EntryContext& ctx, uint64_t k, std::span<const uint8_t> preimage);
    void report_timeout(EntryContext& ctx, uint64_t j);
    Payout leave(EntryContext& ctx);
    uint64_t add_checkpoint(EntryContext& ctx, const Digest& digest);
    Payout get_gas_payment(EntryContext& ctx);

    // Resolves the auction winner once bidding closed; idempotent. Used by
    // simulate/report_timeout and callable directly by observers.
    vm::Address close_auction(uint64_t j, uint64_t current_block);

    // Post-execution hooks driven by the chain within the same transaction.
    void credit_gamma(const vm::Address& initiator, uint64_t gas);
    // Returns payouts owed when a verdict settles (none immediately; claims
    // are pull-based) and flips flags/blacklists.
    void settle_verdict(const EntryContext& ctx);

    // --- queries ---
    const LedgerEntry& entry_at(uint64_t index) const;
    LedgerEntry& entry_at_mut(uint64_t index);
    uint64_t head_index() const { return ledger.size(); }
    bool is_member(const vm::Address& p) const;
    // Latest checkpoint standing at `block` with index <= ceiling (0 = none).
    uint64_t latest_standing_checkpoint(uint64_t block, uint64_t ceiling) const;
    bool withdraw_active(const vm::Address& p, uint64_t block) const;
    // Custody the chain account must hold for the books to balance.
    U256 expected_custody() const;
    void encode_state(ByteWriter& w) const; // canonical, for chain hashing

    ReplayEnv replay_env(const EntryContext& ctx) const;

private:
    uint64_t append_entry(EntryContext& ctx, LedgerEntry entry);
    void charge_common_checks(EntryContext& ctx) const;
    PartyAccount& require_member(EntryContext& ctx);
};

} // namespace lazyc::proto
