#pragma once

#include "lazyc/proto/lazy_state.hpp"
#include "lazyc/vm/gas.hpp"
#include "lazyc/vm/interp.hpp"
#include "lazyc/wrap/lazy_contract.hpp"

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lazyc::chain {

struct Transaction {
    uint64_t id = 0; // assigned by submit_tx
    vm::Address origin;
    vm::Address target;
    std::string entry;            // protocol entry point, or "call" for plain contracts
    std::vector<uint8_t> payload; // canonical argument encoding (see txdata)
    U256 value;
    uint64_t gas_limit = 0;
    U256 gas_price;
};

struct MalformedTransaction : std::runtime_error {
    explicit MalformedTransaction(const std::string& what) : std::runtime_error(what) {}
};

// Receipt outcome: executed transactions report the three-case result;
// rejected and over_cap ones never executed (and paid no fee).
enum class TxStatus : uint8_t { Success, Revert, OutOfGas, Rejected, OverCap };

const char* tx_status_name(TxStatus s);

struct TxReceipt {
    uint64_t id = 0;
    vm::Address origin;
    std::string entry;
    TxStatus status = TxStatus::Success;
    uint64_t gas_used = 0;
    U256 fee;
    std::string error; // rejection reason or revert detail
    // Ledger side effects, for traces and replica feeds.
    std::vector<uint64_t> appended_entries;
    bool verdict_reached = false;
};

struct BlockReceipt {
    uint64_t height = 0;
    std::vector<TxReceipt> txs;
};

// Every account (parties and contracts alike) lives in one balance map;
// conservation is audited over the whole map plus the fee sink.
struct PlainDeployment {
    std::shared_ptr<const wrap::LazyContract> bundle; // original (unwrapped) forms
    std::shared_ptr<const std::map<std::string, vm::BundleFn>> table;
    vm::Storage storage;
};

struct Deployment {
    std::variant<PlainDeployment, proto::LazyContractState> impl;

    bool is_plain() const { return impl.index() == 0; }
    PlainDeployment& plain() { return std::get<PlainDeployment>(impl); }
    const PlainDeployment& plain() const { return std::get<PlainDeployment>(impl); }
    proto::LazyContractState& lazy() { return std::get<proto::LazyContractState>(impl); }
    const proto::LazyContractState& lazy() const {
        return std::get<proto::LazyContractState>(impl);
    }
};

struct AuditError : std::runtime_error {
    explicit AuditError(const std::string& what) : std::runtime_error(what) {}
};

struct ChainState {
    vm::GasSchedule sched;
    HashFn hash = default_hash();
    uint64_t block_gas_cap = 30'000'000;

    uint64_t height = 0;
    std::map<vm::Address, U256> accounts;
    std::map<vm::Address, Deployment> deployed;
    std::deque<Transaction> mempool;
    U256 fee_sink;
    U256 genesis_total;
    uint64_t next_tx_id = 0;
    std::vector<BlockReceipt> receipts;

    // Genesis minting: the only place currency enters the system.
    void genesis_mint(const vm::Address& addr, const U256& amount);
    void load_genesis(std::string_view text); // "address amount" lines, '#' comments

    // Deployments are harness setup (free), not transactions.
    void deploy_lazy(const vm::Address& at, std::shared_ptr<const wrap::LazyContract> program);
    // Deploys the bundle's original forms for direct on-chain execution.
    void deploy_plain(const vm::Address& at, std::shared_ptr<const wrap::LazyContract> bundle);

    uint64_t submit_tx(Transaction tx);
    BlockReceipt mine_block();

    U256 account_balance(const vm::Address& addr) const;
    const proto::LazyContractState* find_lazy(const vm::Address& at) const;

    Digest state_hash() const;

    // Throws AuditError when currency conservation or any wrapper's custody
    // equation fails. mine_block runs it after every block.
    void audit() const;

private:
    TxReceipt execute_tx(const Transaction& tx);
};

// Canonical payload builders for the published entry points.
namespace txdata {

std::vector<uint8_t> plain_call(const std::string& fname, const std::vector<vm::Value>& args);
std::vector<uint8_t> request_call(const std::string& fname, uint64_t gas_limit,
                                  const U256& payment, const std::vector<vm::Value>& args);
std::vector<uint8_t> request_withdraw(const U256& amount);
std::vector<uint8_t> with_index(uint64_t j); // withdraw / challenge / reportTimeout
std::vector<uint8_t> bid(uint64_t j, const U256& price);
std::vector<uint8_t> simulate(uint64_t k, std::span<const uint8_t> preimage = {});
std::vector<uint8_t> checkpoint(const Digest& digest);

} // namespace txdata

} // namespace lazyc::chain
