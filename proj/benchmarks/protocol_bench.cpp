#include "lazyc/chain/chain.hpp"
#include "lazyc/mcl/frontend.hpp"
#include "lazyc/sim/harness.hpp"
#include "lazyc/sim/workload.hpp"

#include <benchmark/benchmark.h>

#include <sstream>

using namespace lazyc;

namespace {

const char* kRegistry = R"(
contract Registry {
    map(address => uint) owed;

    function credit(address to, uint amount) {
        owed[to] = owed[to] + amount;
    }
}
)";

std::shared_ptr<const wrap::LazyContract> registry_program() {
    wrap::LazyParams p;
    p.deposit = U256(1'000'000);
    p.window = 5;
    return std::make_shared<const wrap::LazyContract>(
        wrap::wrap_contract(mcl::validate(mcl::parse(kRegistry)), p));
}

// Cost of appending call requests to the on-chain ledger (the hot path of
// an all-honest deployment).
void BM_request_call_append(benchmark::State& state) {
    auto program = registry_program();
    chain::ChainState chain;
    chain.genesis_mint(vm::Address{"p"}, U256::from_limbs(0, 1, 0, 0));
    chain.deploy_lazy(vm::Address{"L"}, program);
    chain::Transaction join;
    join.origin = vm::Address{"p"};
    join.target = vm::Address{"L"};
    join.entry = "join";
    join.value = U256(1'000'000);
    join.gas_limit = 1'000'000;
    join.gas_price = U256(1);
    chain.submit_tx(std::move(join));
    chain.mine_block();

    for (auto _ : state) {
        chain::Transaction tx;
        tx.origin = vm::Address{"p"};
        tx.target = vm::Address{"L"};
        tx.entry = "requestCall";
        tx.payload = chain::txdata::request_call(
            "Registry.credit", 500'000, U256(0),
            {vm::Value(vm::Address{"p"}), vm::Value(U256(5))});
        tx.gas_limit = 1'000'000;
        tx.gas_price = U256(1);
        chain.submit_tx(std::move(tx));
        auto rec = chain.mine_block();
        benchmark::DoNotOptimize(rec.txs.front().gas_used);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_request_call_append)->Unit(benchmark::kMicrosecond);

// An entire dispute: fraud, challenge, auction, replay of `n` entries.
void BM_full_dispute(benchmark::State& state) {
    const uint64_t n_calls = uint64_t(state.range(0));
    std::ostringstream scn;
    scn << "param deposit 5000000\nparam window 8\n";
    scn << "genesis mallory 100000000\ngenesis bob 100000000\ngenesis ingrid 100000000\n";
    scn << "party mallory overwithdraw:at=" << (10 + n_calls) << ",excess=1\n";
    scn << "party bob honest\nparty ingrid honest:bid=2\n";
    scn << "@block 2 mallory join\n@block 2 bob join\n@block 2 ingrid join\n";
    scn << "@block 3 mallory deposit 500\n";
    for (uint64_t i = 0; i < n_calls; ++i)
        scn << "@block " << (4 + i) << " bob call credit 2000000 bob 7\n";
    std::string text = scn.str();

    for (auto _ : state) {
        sim::Scenario sc = sim::parse_scenario(text);
        sc.horizon = 10 + n_calls + 60;
        sim::Harness h(std::move(sc), {kRegistry});
        auto r = h.run();
        benchmark::DoNotOptimize(r.report.verdicts.size());
    }
    state.SetItemsProcessed(state.iterations() * (n_calls + 2));
}
BENCHMARK(BM_full_dispute)->Arg(4)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_benchmark_leg(benchmark::State& state) {
    sim::Workload w =
        sim::generate_workload(1, sim::WorkloadTemplate::MapWriter, uint64_t(state.range(0)));
    for (auto _ : state) {
        auto rep = sim::run_benchmark(w, {});
        benchmark::DoNotOptimize(rep.total_lazy);
    }
}
BENCHMARK(BM_benchmark_leg)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

} // namespace
