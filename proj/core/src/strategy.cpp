#include "lazyc/party/strategy.hpp"

#include <algorithm>

namespace lazyc::party {

const char* strategy_kind_name(StrategyKind k) {
    switch (k) {
    case StrategyKind::Scripted: return "scripted";
    case StrategyKind::Honest: return "honest";
    case StrategyKind::OverWithdrawer: return "overwithdraw";
    case StrategyKind::FalseChallenger: return "falsechallenger";
    case StrategyKind::SleepyInitiator: return "sleepy";
    }
    return "?";
}

namespace {

// Same tie-break as the contract: lowest price, then earliest block, then
// earliest transaction.
const proto::BidRecord* projected_winner(const proto::AuctionState& a) {
    const proto::BidRecord* best = nullptr;
    for (const auto& bd : a.bids) {
        if (best == nullptr || bd.price < best->price ||
            (bd.price == best->price &&
             (bd.block < best->block || (bd.block == best->block && bd.tx_id < best->tx_id))))
            best = &bd;
    }
    return best;
}

} // namespace

chain::Transaction Strategy::make_tx(const Observation& obs, std::string entry,
                                     std::vector<uint8_t> payload, U256 value,
                                     std::optional<uint64_t> gas) const {
    chain::Transaction tx;
    tx.origin = self_;
    tx.target = obs.lazy_address;
    tx.entry = std::move(entry);
    tx.payload = std::move(payload);
    tx.value = value;
    tx.gas_limit = gas.value_or(cfg_.tx_gas_limit);
    tx.gas_price = cfg_.tx_gas_price;
    return tx;
}

std::vector<chain::Transaction> Strategy::step(const Observation& obs) {
    std::vector<chain::Transaction> out;
    if (cfg_.kind == StrategyKind::Scripted) return out;
    const auto& lazy = *obs.lazy;
    bool member = lazy.is_member(self_);

    // The scripted deviation of an over-withdrawer: ask for more than the
    // replica says we own.
    if (cfg_.kind == StrategyKind::OverWithdrawer && !overwithdraw_done_ && member &&
        obs.block >= cfg_.trigger_block) {
        U256 mine = vm::balance_of(obs.replica->balances_view, self_);
        U256 ask = add_exact(mine, cfg_.excess);
        if (!ask.is_zero() && !lazy.withdraw_active(self_, obs.block)) {
            out.push_back(
                make_tx(obs, "requestWithdraw", chain::txdata::request_withdraw(ask)));
            overwithdraw_done_ = true;
        }
    }

    if (member) consider_challenges(obs, out);
    consider_dispute(obs, out);
    consider_finalize(obs, out);
    consider_claims(obs, out);
    return out;
}

void Strategy::consider_challenges(const Observation& obs, std::vector<chain::Transaction>& out) {
    const auto& lazy = *obs.lazy;
    for (const LedgerEvent& ev : obs.new_entries) {
        const proto::LedgerEntry& e = lazy.entry_at(ev.index);
        bool mine = e.author() == self_;
        if (mine) continue;
        bool challengeable = e.is_withdraw() || e.is_checkpoint();
        if (!challengeable) continue;
        bool attack = false;
        if (ev.fraud) {
            // Honest completeness: every detected fraud gets a challenge.
            if (cfg_.kind != StrategyKind::FalseChallenger || e.author() != cfg_.target)
                attack = true;
            else
                attack = true; // the target really was dishonest; challenge stands
        } else if (cfg_.kind == StrategyKind::FalseChallenger && e.is_withdraw() &&
                   e.author() == cfg_.target) {
            attack = true; // the deviation: challenge a perfectly valid withdrawal
        }
        if (attack && !seen_frauds_.count(ev.index)) {
            seen_frauds_.insert(ev.index);
            pending_challenges_.push_back(ev.index);
        }
    }

    // One dispute at a time: fire the oldest pending challenge whose window
    // is still open once the floor is free.
    if (!obs.lazy->dispute && !pending_challenges_.empty()) {
        uint64_t j = pending_challenges_.front();
        const proto::LedgerEntry& e = obs.lazy->entry_at(j);
        bool open = obs.block + 1 <= e.block + obs.lazy->params.window;
        bool already_settled = (e.is_withdraw() && (e.withdraw().paid || e.withdraw().challenged)) ||
                               (e.is_checkpoint() && (e.checkpoint().challenged || e.checkpoint().defeated));
        pending_challenges_.erase(pending_challenges_.begin());
        if (open && !already_settled) {
            out.push_back(make_tx(obs, "challenge", chain::txdata::with_index(j)));
        }
    }
}

void Strategy::consider_dispute(const Observation& obs, std::vector<chain::Transaction>& out) {
    const auto& lazy = *obs.lazy;
    if (!lazy.dispute) {
        steps_simulated_ = 0;
        current_dispute_ = 0;
        return;
    }
    const proto::Dispute& d = *lazy.dispute;
    if (current_dispute_ != d.index) {
        current_dispute_ = d.index;
        steps_simulated_ = 0;
    }
    bool member = lazy.is_member(self_);
    uint64_t next_block = obs.block + 1; // our transactions land here

    // Bidding.
    bool party_to_dispute = d.requester == self_ || d.challenger == self_;
    if (member && cfg_.bid_price && !party_to_dispute && !d.winner_decided &&
        next_block >= d.auction.open_from && next_block <= d.auction.open_until &&
        !bids_placed_.count({d.index, d.auction.open_from})) {
        bids_placed_.insert({d.index, d.auction.open_from});
        out.push_back(make_tx(obs, "bid", chain::txdata::bid(d.index, *cfg_.bid_price)));
    }

    // After bidding closes anyone can project the winner and the deadline.
    if (next_block <= d.auction.open_until) return;
    const proto::BidRecord* winner =
        d.winner_decided ? nullptr : projected_winner(d.auction);
    vm::Address winner_addr =
        d.winner_decided ? *d.auction.winner : (winner ? winner->party : vm::Address{});
    if (winner_addr.empty()) return; // stalled: no bids
    uint64_t deadline = d.winner_decided ? d.deadline : d.auction.open_until + lazy.params.window;

    if (winner_addr == self_ && member) {
        // Sleepy initiators go silent after their configured step count.
        if (cfg_.kind == StrategyKind::SleepyInitiator && steps_simulated_ >= cfg_.miss_after)
            return;
        if (next_block > deadline) return; // too late anyway
        uint64_t k = d.seeded ? lazy.sim_cursor + 1 : d.replay_from + 1;
        if (k > d.index) return;
        std::vector<uint8_t> preimage;
        if (!d.seeded) {
            auto it = obs.replica->checkpoint_preimages.find(d.replay_from);
            if (it == obs.replica->checkpoint_preimages.end()) return;
            preimage = it->second;
        }
        const proto::LedgerEntry& entry = lazy.entry_at(k);
        uint64_t gas = cfg_.tx_gas_limit;
        if (entry.is_call()) gas = std::max<uint64_t>(gas, entry.call().gas_limit + 600'000);
        steps_simulated_ += 1;
        out.push_back(make_tx(obs, "simulate", chain::txdata::simulate(k, preimage), U256{},
                              gas));
        return;
    }

    // Not the winner: report a missed deadline once per round.
    if (member && next_block > deadline && !timeouts_sent_.count({d.index, deadline})) {
        timeouts_sent_.insert({d.index, deadline});
        out.push_back(make_tx(obs, "reportTimeout", chain::txdata::with_index(d.index)));
    }
}

void Strategy::consider_finalize(const Observation& obs, std::vector<chain::Transaction>& out) {
    const auto& lazy = *obs.lazy;
    uint64_t next_block = obs.block + 1;
    for (const auto& e : lazy.ledger) {
        if (!e.is_withdraw()) continue;
        const auto& wd = e.withdraw();
        if (wd.party != self_ || wd.paid || wd.challenged) continue;
        if (next_block <= e.block + lazy.params.window) continue;
        out.push_back(make_tx(obs, "withdraw", chain::txdata::with_index(e.index)));
        break; // one finalization per block keeps traces readable
    }
}

void Strategy::consider_claims(const Observation& obs, std::vector<chain::Transaction>& out) {
    const auto& lazy = *obs.lazy;
    auto it = lazy.claims.find(self_);
    if (it != lazy.claims.end() && !it->second.is_zero()) {
        out.push_back(make_tx(obs, "getGasPayment", {}));
    }
}

} // namespace lazyc::party
