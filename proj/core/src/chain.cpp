#include "lazyc/chain/chain.hpp"

#include <cassert>
#include <charconv>
#include <sstream>

namespace lazyc::chain {

const char* tx_status_name(TxStatus s) {
    switch (s) {
    case TxStatus::Success: return "success";
    case TxStatus::Revert: return "revert";
    case TxStatus::OutOfGas: return "out_of_gas";
    case TxStatus::Rejected: return "rejected";
    case TxStatus::OverCap: return "over_cap";
    }
    return "?";
}

void ChainState::genesis_mint(const vm::Address& addr, const U256& amount) {
    accounts[addr] = add_exact(accounts[addr], amount);
    genesis_total = add_exact(genesis_total, amount);
}

void ChainState::load_genesis(std::string_view text) {
    size_t pos = 0;
    size_t lineno = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        std::istringstream is{std::string(line)};
        std::string addr, amount;
        if (!(is >> addr)) continue;
        if (!(is >> amount))
            throw MalformedTransaction("genesis line " + std::to_string(lineno) +
                                       ": expected 'address amount'");
        auto v = U256::parse(amount);
        if (!v)
            throw MalformedTransaction("genesis line " + std::to_string(lineno) +
                                       ": bad amount '" + amount + "'");
        genesis_mint(vm::Address{addr}, *v);
    }
}

void ChainState::deploy_lazy(const vm::Address& at,
                             std::shared_ptr<const wrap::LazyContract> program) {
    if (deployed.count(at)) throw MalformedTransaction("address already in use");
    Deployment d;
    d.impl = proto::LazyContractState::deploy(std::move(program), at);
    deployed.emplace(at, std::move(d));
}

void ChainState::deploy_plain(const vm::Address& at,
                              std::shared_ptr<const wrap::LazyContract> bundle) {
    if (deployed.count(at)) throw MalformedTransaction("address already in use");
    PlainDeployment p;
    p.storage = bundle->initial_storage();
    p.table = std::make_shared<std::map<std::string, vm::BundleFn>>(bundle->original_table());
    p.bundle = std::move(bundle);
    Deployment d;
    d.impl = std::move(p);
    deployed.emplace(at, std::move(d));
}

uint64_t ChainState::submit_tx(Transaction tx) {
    if (tx.entry.empty()) throw MalformedTransaction("empty entry point");
    if (tx.origin.empty()) throw MalformedTransaction("missing origin");
    tx.id = next_tx_id++;
    mempool.push_back(std::move(tx));
    return mempool.back().id;
}

U256 ChainState::account_balance(const vm::Address& addr) const {
    auto it = accounts.find(addr);
    return it == accounts.end() ? U256{} : it->second;
}

const proto::LazyContractState* ChainState::find_lazy(const vm::Address& at) const {
    auto it = deployed.find(at);
    if (it == deployed.end() || it->second.is_plain()) return nullptr;
    return &it->second.lazy();
}

namespace {

U256 gas_fee(uint64_t gas, const U256& price) {
    U256 out;
    bool ok = checked_mul(U256(gas), price, out);
    if (!ok) throw AuditError("fee overflow");
    return out;
}

} // namespace

BlockReceipt ChainState::mine_block() {
    height += 1;
    BlockReceipt block;
    block.height = height;

    uint64_t remaining_cap = block_gas_cap;
    std::deque<Transaction> kept;
    while (!mempool.empty()) {
        Transaction tx = std::move(mempool.front());
        mempool.pop_front();
        if (tx.gas_limit > block_gas_cap) {
            // Can never fit in any block; flagged and dropped.
            TxReceipt r;
            r.id = tx.id;
            r.origin = tx.origin;
            r.entry = tx.entry;
            r.status = TxStatus::OverCap;
            r.error = "OverCap";
            block.txs.push_back(std::move(r));
            continue;
        }
        if (tx.gas_limit > remaining_cap) {
            kept.push_back(std::move(tx)); // waits for the next block
            continue;
        }
        TxReceipt r = execute_tx(tx);
        if (r.status != TxStatus::Rejected) remaining_cap -= tx.gas_limit;
        block.txs.push_back(std::move(r));
    }
    mempool = std::move(kept);
    receipts.push_back(block);
    audit();
    return block;
}

TxReceipt ChainState::execute_tx(const Transaction& tx) {
    TxReceipt r;
    r.id = tx.id;
    r.origin = tx.origin;
    r.entry = tx.entry;

    auto reject = [&](const std::string& why) {
        r.status = TxStatus::Rejected;
        r.error = why;
        return r;
    };

    auto dit = deployed.find(tx.target);
    if (dit == deployed.end()) return reject("TargetUnknown");

    uint64_t intrinsic = sched.intrinsic_gas(tx.entry.size() + tx.payload.size());
    if (intrinsic > tx.gas_limit) return reject("IntrinsicTooLow");

    U256 deposit = gas_fee(tx.gas_limit, tx.gas_price);
    U256 need = add_exact(deposit, tx.value);
    if (account_balance(tx.origin) < need) return reject("InsufficientFunds");

    // Copy-and-commit: accounts and the target contract roll back wholesale
    // on revert or out-of-gas.
    std::map<vm::Address, U256> accounts_before = accounts;
    Deployment target_before = dit->second;

    bool flat = sched.flat_tx_gas != 0;
    if (flat && sched.flat_tx_gas > tx.gas_limit) {
        r.status = TxStatus::OutOfGas;
        r.gas_used = tx.gas_limit;
        r.fee = deposit;
        accounts[tx.origin] = sub_exact(accounts[tx.origin], deposit);
        fee_sink = add_exact(fee_sink, deposit);
        return r;
    }

    // Flat stub: native metering must not interfere, the reported gas is
    // overridden below anyway.
    vm::GasMeter meter{flat ? block_gas_cap : tx.gas_limit, intrinsic, nullptr};
    uint64_t vm_gas = 0; // plain-call execution gas, metered separately
    bool failed = false;
    bool out_of_gas = false;

    try {
        if (dit->second.is_plain()) {
            PlainDeployment& plain = dit->second.plain();
            if (tx.entry != "call") throw MalformedTransaction("plain contracts only take 'call'");
            ByteReader rd(tx.payload);
            std::string fname = rd.str();
            uint32_t argc = rd.u32();
            std::vector<vm::Value> args;
            for (uint32_t i = 0; i < argc; ++i) args.push_back(vm::decode_value(rd));

            auto fit = plain.table->find(fname);
            if (fit == plain.table->end()) throw proto::ProtoError(proto::ProtoErr::UnknownFunction, "no function " + fname);

            vm::CallEnv env;
            env.msg_sender = tx.origin;
            env.msg_value = tx.value;
            env.block_number = height;
            env.gas_price = tx.gas_price;
            env.gas_limit = flat ? block_gas_cap : tx.gas_limit - intrinsic;

            // The callee sees real chain balances; the attached value moves
            // inside the VM via the payable semantics.
            vm::VmHost host{&sched, &hash, plain.table.get()};
            vm::ExecutionResult res = vm::execute_call(host, *fit->second.fn, fit->second.self,
                                                       args, env, plain.storage, accounts,
                                                       nullptr);
            vm_gas = res.gas_used;
            if (res.outcome == vm::Outcome::Success) {
                plain.storage = std::move(res.storage_after);
                accounts = std::move(res.balances_after);
            } else {
                failed = true;
                out_of_gas = res.outcome == vm::Outcome::OutOfGas;
                r.error = res.revert_reason;
            }
        } else {
            proto::LazyContractState& lazy = dit->second.lazy();
            // Custody receives the attached value before the handler runs;
            // rollback returns it on failure.
            if (!tx.value.is_zero()) {
                accounts[tx.origin] = sub_exact(accounts[tx.origin], tx.value);
                accounts[lazy.self] = add_exact(accounts[lazy.self], tx.value);
            }

            proto::EntryContext ctx;
            ctx.block = height;
            ctx.tx_id = tx.id;
            ctx.origin = tx.origin;
            ctx.value = tx.value;
            ctx.meter = &meter;
            ctx.sched = &sched;
            ctx.hash = &hash;
            ctx.block_gas_cap = block_gas_cap;

            std::vector<proto::Payout> payouts;
            ByteReader rd(tx.payload);
            if (tx.entry == "join") {
                lazy.join(ctx);
            } else if (tx.entry == "depositEther") {
                r.appended_entries.push_back(lazy.deposit_ether(ctx));
            } else if (tx.entry == "requestCall") {
                std::string fname = rd.str();
                uint64_t gm = rd.u64();
                U256 payment = rd.u256();
                uint32_t argc = rd.u32();
                std::vector<vm::Value> args;
                for (uint32_t i = 0; i < argc; ++i) args.push_back(vm::decode_value(rd));
                r.appended_entries.push_back(
                    lazy.request_call(ctx, fname, gm, std::move(args), payment));
            } else if (tx.entry == "requestWithdraw") {
                r.appended_entries.push_back(lazy.request_withdraw(ctx, rd.u256()));
            } else if (tx.entry == "withdraw") {
                payouts.push_back(lazy.finalize_withdraw(ctx, rd.u64()));
            } else if (tx.entry == "challenge") {
                lazy.challenge(ctx, rd.u64());
            } else if (tx.entry == "bid") {
                uint64_t j = rd.u64();
                U256 price = rd.u256();
                lazy.bid(ctx, j, price);
            } else if (tx.entry == "simulate") {
                uint64_t k = rd.u64();
                std::vector<uint8_t> preimage = rd.bytes();
                proto::StepReceipt step = lazy.simulate(ctx, k, preimage);
                r.verdict_reached = step.verdict_reached;
                // The initiator's tally includes this whole transaction,
                // intrinsic and verdict bookkeeping included.
                uint64_t total = flat ? sched.flat_tx_gas : meter.used;
                lazy.credit_gamma(tx.origin, total);
                if (step.verdict_reached) lazy.settle_verdict(ctx);
            } else if (tx.entry == "reportTimeout") {
                lazy.report_timeout(ctx, rd.u64());
            } else if (tx.entry == "leave") {
                payouts.push_back(lazy.leave(ctx));
            } else if (tx.entry == "checkpoint") {
                Digest digest{};
                for (auto& byte : digest) byte = rd.u8();
                r.appended_entries.push_back(lazy.add_checkpoint(ctx, digest));
            } else if (tx.entry == "getGasPayment") {
                payouts.push_back(lazy.get_gas_payment(ctx));
            } else {
                throw MalformedTransaction("unknown entry point '" + tx.entry + "'");
            }

            for (const proto::Payout& p : payouts) {
                U256 custody = account_balance(lazy.self);
                if (custody < p.amount) throw AuditError("custody underfunded for payout");
                accounts[lazy.self] = sub_exact(custody, p.amount);
                accounts[p.to] = add_exact(account_balance(p.to), p.amount);
            }
        }
    } catch (const proto::ProtoError& e) {
        failed = true;
        r.error = e.what();
    } catch (const vm::OutOfGas&) {
        failed = true;
        out_of_gas = true;
    } catch (const vm::ArgumentMismatch& e) {
        failed = true;
        r.error = e.what();
    } catch (const MalformedTransaction& e) {
        failed = true;
        r.error = e.what();
    } catch (const DecodeError& e) {
        failed = true;
        r.error = std::string("bad payload: ") + e.what();
    }

    uint64_t executed_gas = flat ? sched.flat_tx_gas : meter.used + vm_gas;
    if (executed_gas > tx.gas_limit) out_of_gas = true;

    if (failed) {
        accounts = std::move(accounts_before);
        dit->second = std::move(target_before);
    }
    if (out_of_gas) {
        // The whole deposit is forfeited to the miner.
        r.status = TxStatus::OutOfGas;
        r.gas_used = tx.gas_limit;
        r.fee = deposit;
        r.appended_entries.clear();
        r.verdict_reached = false;
        accounts[tx.origin] = sub_exact(accounts[tx.origin], deposit);
        fee_sink = add_exact(fee_sink, deposit);
        return r;
    }

    r.status = failed ? TxStatus::Revert : TxStatus::Success;
    if (failed) {
        r.appended_entries.clear();
        r.verdict_reached = false;
    }
    r.gas_used = executed_gas;
    r.fee = gas_fee(executed_gas, tx.gas_price);
    accounts[tx.origin] = sub_exact(accounts[tx.origin], r.fee);
    fee_sink = add_exact(fee_sink, r.fee);
    return r;
}

Digest ChainState::state_hash() const {
    ByteWriter w;
    w.u64(height);
    w.u256(genesis_total);
    w.u256(fee_sink);
    w.u32((uint32_t)accounts.size());
    for (const auto& [a, x] : accounts) {
        vm::encode_address(w, a);
        w.u256(x);
    }
    w.u32((uint32_t)deployed.size());
    for (const auto& [a, d] : deployed) {
        vm::encode_address(w, a);
        if (d.is_plain()) {
            w.u8(0);
            vm::encode_storage(w, d.plain().storage);
        } else {
            w.u8(1);
            d.lazy().encode_state(w);
        }
    }
    w.u32((uint32_t)mempool.size());
    for (const auto& tx : mempool) {
        w.u64(tx.id);
        vm::encode_address(w, tx.origin);
        w.str(tx.entry);
        w.bytes(tx.payload);
    }
    return sha256(w.data());
}

void ChainState::audit() const {
    U256 total = fee_sink;
    for (const auto& [a, x] : accounts) total = add_exact(total, x);
    if (total != genesis_total)
        throw AuditError("currency conservation violated: accounts+fees " + total.to_dec() +
                         " != minted " + genesis_total.to_dec());
    for (const auto& [a, d] : deployed) {
        if (d.is_plain()) continue;
        U256 expected = d.lazy().expected_custody();
        U256 held = account_balance(a);
        if (held != expected)
            throw AuditError("custody mismatch for " + a.label + ": holds " + held.to_dec() +
                             ", books say " + expected.to_dec());
    }
}

namespace txdata {

std::vector<uint8_t> plain_call(const std::string& fname, const std::vector<vm::Value>& args) {
    ByteWriter w;
    w.str(fname);
    w.u32((uint32_t)args.size());
    for (const auto& a : args) vm::encode_value(w, a);
    return w.take();
}

std::vector<uint8_t> request_call(const std::string& fname, uint64_t gas_limit,
                                  const U256& payment, const std::vector<vm::Value>& args) {
    ByteWriter w;
    w.str(fname);
    w.u64(gas_limit);
    w.u256(payment);
    w.u32((uint32_t)args.size());
    for (const auto& a : args) vm::encode_value(w, a);
    return w.take();
}

std::vector<uint8_t> request_withdraw(const U256& amount) {
    ByteWriter w;
    w.u256(amount);
    return w.take();
}

std::vector<uint8_t> with_index(uint64_t j) {
    ByteWriter w;
    w.u64(j);
    return w.take();
}

std::vector<uint8_t> bid(uint64_t j, const U256& price) {
    ByteWriter w;
    w.u64(j);
    w.u256(price);
    return w.take();
}

std::vector<uint8_t> simulate(uint64_t k, std::span<const uint8_t> preimage) {
    ByteWriter w;
    w.u64(k);
    w.bytes(preimage);
    return w.take();
}

std::vector<uint8_t> checkpoint(const Digest& digest) {
    ByteWriter w;
    w.raw(std::span<const uint8_t>(digest.data(), digest.size()));
    return w.take();
}

} // namespace txdata

} // namespace lazyc::chain
