#include "lazyc/sim/workload.hpp"

#include "lazyc/chain/chain.hpp"
#include "lazyc/encoding.hpp"
#include "lazyc/mcl/frontend.hpp"

#include <stdexcept>

namespace lazyc::sim {

namespace {

constexpr const char* kCounterSrc = R"(
contract Tally {
    uint count;

    function bump() {
        count = count + 1;
    }
}
)";

constexpr const char* kEscrowSrc = R"(
contract Escrow {
    address owner = @p0;
    uint desiredResult;

    function start(uint a) payable {
        require(msg.sender == owner);
        desiredResult = a;
    }

    function getReward(uint y) {
        uint x = block.number;
        address recipient = msg.sender;
        if (hash(x + y) == desiredResult) {
            transfer(recipient, this.balance);
        }
    }

    function cancel() {
        require(msg.sender == owner);
        transfer(msg.sender, this.balance);
    }
}
)";

constexpr const char* kLoopHeavySrc = R"(
contract Grinder {
    uint acc;

    function work(uint n) {
        uint i = 0;
        while (i < n) {
            acc = acc + i;
            i = i + 1;
        }
    }
}
)";

constexpr const char* kMapWriterSrc = R"(
contract Registry {
    map(address => uint) owed;

    function credit(address to, uint amount) {
        owed[to] = owed[to] + amount;
    }
}
)";

} // namespace

WorkloadTemplate workload_template_from_name(const std::string& name) {
    if (name == "counter") return WorkloadTemplate::Counter;
    if (name == "escrow") return WorkloadTemplate::Escrow;
    if (name == "loop-heavy" || name == "loop_heavy") return WorkloadTemplate::LoopHeavy;
    if (name == "map-writer" || name == "map_writer") return WorkloadTemplate::MapWriter;
    throw std::invalid_argument("unknown workload template '" + name + "'");
}

const char* workload_template_name(WorkloadTemplate t) {
    switch (t) {
    case WorkloadTemplate::Counter: return "counter";
    case WorkloadTemplate::Escrow: return "escrow";
    case WorkloadTemplate::LoopHeavy: return "loop-heavy";
    case WorkloadTemplate::MapWriter: return "map-writer";
    }
    return "?";
}

Workload generate_workload(uint64_t seed, WorkloadTemplate tmpl, uint64_t n_calls) {
    Workload w;
    w.seed = seed;
    w.tmpl = tmpl;
    w.parties = {"p0", "p1", "p2"};
    Prng rng(seed ^ 0x9e3779b97f4a7c15ULL);

    auto party = [&] { return w.parties[rng.below(w.parties.size())]; };

    switch (tmpl) {
    case WorkloadTemplate::Counter: {
        w.contract_source = kCounterSrc;
        for (uint64_t i = 0; i < n_calls; ++i)
            w.calls.push_back(WorkloadCall{party(), "bump", {}, U256{}, 100'000});
        w.funding_per_party = U256(0);
        break;
    }
    case WorkloadTemplate::Escrow: {
        w.contract_source = kEscrowSrc;
        // p0 owns the escrow; a third of the calls are payable starts so the
        // funding prologue is exercised, the rest are guesses and cancels.
        for (uint64_t i = 0; i < n_calls; ++i) {
            uint64_t roll = rng.below(6);
            if (roll < 2) {
                U256 pay(rng.below(500) + 1);
                w.calls.push_back(WorkloadCall{"p0", "start",
                                               {vm::Value(U256(rng.next() >> 40))}, pay,
                                               400'000});
            } else if (roll < 5) {
                w.calls.push_back(WorkloadCall{party(), "getReward",
                                               {vm::Value(U256(rng.below(100'000)))}, U256{},
                                               400'000});
            } else {
                w.calls.push_back(WorkloadCall{"p0", "cancel", {}, U256{}, 400'000});
            }
        }
        w.funding_per_party = U256(1'000'000);
        break;
    }
    case WorkloadTemplate::LoopHeavy: {
        w.contract_source = kLoopHeavySrc;
        for (uint64_t i = 0; i < n_calls; ++i)
            w.calls.push_back(WorkloadCall{party(), "work", {vm::Value(U256(1000))}, U256{},
                                           8'000'000});
        w.funding_per_party = U256(0);
        break;
    }
    case WorkloadTemplate::MapWriter: {
        w.contract_source = kMapWriterSrc;
        for (uint64_t i = 0; i < n_calls; ++i) {
            vm::Address to{w.parties[rng.below(w.parties.size())]};
            w.calls.push_back(WorkloadCall{party(), "credit",
                                           {vm::Value(to), vm::Value(U256(rng.below(1000) + 1))},
                                           U256{}, 300'000});
        }
        w.funding_per_party = U256(0);
        break;
    }
    }
    return w;
}

GasReport run_benchmark(const Workload& w, const vm::GasSchedule& sched) {
    GasReport report;
    report.seed = w.seed;
    report.has_eager_leg = true;

    mcl::ValidatedContract validated = mcl::validate(mcl::parse(w.contract_source));
    std::string contract_name = validated.def.name;
    wrap::LazyParams params;
    params.deposit = U256(1'000'000);
    params.window = 5;
    auto program = std::make_shared<const wrap::LazyContract>(
        wrap::wrap_contract(std::move(validated), params));

    const U256 kFunding(1'000'000'000);
    const U256 kPrice(1);

    // Leg 1: the original contract executes every call on-chain.
    chain::ChainState eager;
    eager.sched = sched;
    for (const auto& p : w.parties) eager.genesis_mint(vm::Address{p}, kFunding);
    eager.deploy_plain(vm::Address{contract_name}, program);
    std::vector<uint64_t> eager_gas;
    for (const auto& call : w.calls) {
        chain::Transaction tx;
        tx.origin = vm::Address{call.party};
        tx.target = vm::Address{contract_name};
        tx.entry = "call";
        tx.payload = chain::txdata::plain_call(contract_name + "." + call.fname, call.args);
        tx.value = call.payment;
        tx.gas_limit = call.gas_limit;
        tx.gas_price = kPrice;
        eager.submit_tx(std::move(tx));
        chain::BlockReceipt rec = eager.mine_block();
        if (rec.txs.size() != 1)
            throw std::logic_error("benchmark eager leg lost a transaction");
        eager_gas.push_back(rec.txs[0].gas_used);
    }

    // Leg 2: the wrapper appends the identical requests; nobody disputes.
    chain::ChainState lazy;
    lazy.sched = sched;
    for (const auto& p : w.parties) lazy.genesis_mint(vm::Address{p}, kFunding);
    vm::Address lazy_addr{"L"};
    lazy.deploy_lazy(lazy_addr, program);
    uint64_t overhead = 0;
    for (const auto& p : w.parties) {
        chain::Transaction join;
        join.origin = vm::Address{p};
        join.target = lazy_addr;
        join.entry = "join";
        join.value = params.deposit;
        join.gas_limit = 2'000'000;
        join.gas_price = kPrice;
        lazy.submit_tx(std::move(join));
        if (!w.funding_per_party.is_zero()) {
            chain::Transaction dep;
            dep.origin = vm::Address{p};
            dep.target = lazy_addr;
            dep.entry = "depositEther";
            dep.value = w.funding_per_party;
            dep.gas_limit = 2'000'000;
            dep.gas_price = kPrice;
            lazy.submit_tx(std::move(dep));
        }
    }
    for (const auto& r : lazy.mine_block().txs) {
        if (r.status != chain::TxStatus::Success)
            throw std::logic_error("benchmark lazy setup failed: " + r.error);
        overhead += r.gas_used;
    }

    std::vector<uint64_t> lazy_gas;
    for (const auto& call : w.calls) {
        chain::Transaction tx;
        tx.origin = vm::Address{call.party};
        tx.target = lazy_addr;
        tx.entry = "requestCall";
        tx.payload = chain::txdata::request_call(contract_name + "." + call.fname,
                                                 call.gas_limit, call.payment, call.args);
        tx.gas_limit = 2'000'000;
        tx.gas_price = kPrice;
        lazy.submit_tx(std::move(tx));
        chain::BlockReceipt rec = lazy.mine_block();
        if (rec.txs.size() != 1 || rec.txs[0].status != chain::TxStatus::Success)
            throw std::logic_error("benchmark lazy leg failed: " +
                                   (rec.txs.empty() ? "lost tx" : rec.txs[0].error));
        lazy_gas.push_back(rec.txs[0].gas_used);
    }

    for (size_t i = 0; i < w.calls.size(); ++i) {
        TxGasRecord row;
        row.entry = contract_name + "." + w.calls[i].fname;
        row.gas_eager = eager_gas[i];
        row.gas_lazy = lazy_gas[i];
        report.per_tx.push_back(row);
    }
    report.lazy_overhead_gas = overhead;
    report.blocks = w.calls.size() + 1;
    report.finalize();
    return report;
}

} // namespace lazyc::sim
