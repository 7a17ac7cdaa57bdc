#pragma once

#include "lazyc/chain/chain.hpp"
#include "lazyc/party/replica.hpp"

#include <optional>
#include <set>
#include <vector>

namespace lazyc::party {

enum class StrategyKind : uint8_t {
    Scripted,        // timeline directives only, no autonomous behavior
    Honest,          // challenges fraud, bids, simulates, finalizes, claims
    OverWithdrawer,  // requests balance + excess at a trigger block
    FalseChallenger, // challenges the target's next valid withdrawal
    SleepyInitiator, // wins the auction, then stops after miss_after steps
};

const char* strategy_kind_name(StrategyKind k);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Scripted;
    std::optional<U256> bid_price; // enables bidding when set
    uint64_t trigger_block = 0;    // OverWithdrawer: when to strike
    U256 excess;                   // OverWithdrawer: amount beyond balance
    vm::Address target;            // FalseChallenger: whose withdrawal to attack
    uint64_t miss_after = 0;       // SleepyInitiator: steps before going silent
    uint64_t tx_gas_limit = 2'000'000;
    U256 tx_gas_price = U256(1);
};

// A new ledger entry as this party saw it, with the fraud verdict computed
// against their own replica before applying it.
struct LedgerEvent {
    uint64_t index = 0;
    bool fraud = false;
};

struct Observation {
    uint64_t block = 0; // height of the block just mined
    vm::Address lazy_address;
    const proto::LazyContractState* lazy = nullptr;
    std::vector<LedgerEvent> new_entries;
    const Replica* replica = nullptr; // this party's replica, fully applied
};

// Reactive protocol automation; deterministic given the observation stream.
// Deposits and call requests stay in the scenario timeline even for honest
// parties; strategies drive challenges, bids, simulation, timeouts,
// finalization and claims.
class Strategy {
public:
    Strategy(vm::Address self, StrategyConfig cfg) : self_(std::move(self)), cfg_(cfg) {}

    std::vector<chain::Transaction> step(const Observation& obs);

    const StrategyConfig& config() const { return cfg_; }
    const vm::Address& self() const { return self_; }
    bool is_deviator() const { return cfg_.kind != StrategyKind::Scripted &&
                                      cfg_.kind != StrategyKind::Honest; }

private:
    vm::Address self_;
    StrategyConfig cfg_;

    std::vector<uint64_t> pending_challenges_;
    std::set<uint64_t> seen_frauds_;
    std::set<std::pair<uint64_t, uint64_t>> bids_placed_;    // (dispute, round open_from)
    std::set<std::pair<uint64_t, uint64_t>> timeouts_sent_;  // (dispute, deadline)
    uint64_t steps_simulated_ = 0;                           // current dispute
    uint64_t current_dispute_ = 0;
    bool overwithdraw_done_ = false;

    chain::Transaction make_tx(const Observation& obs, std::string entry,
                               std::vector<uint8_t> payload, U256 value = U256{},
                               std::optional<uint64_t> gas = std::nullopt) const;
    void consider_challenges(const Observation& obs, std::vector<chain::Transaction>& out);
    void consider_dispute(const Observation& obs, std::vector<chain::Transaction>& out);
    void consider_finalize(const Observation& obs, std::vector<chain::Transaction>& out);
    void consider_claims(const Observation& obs, std::vector<chain::Transaction>& out);
};

} // namespace lazyc::party
