#include "lazyc/chain/chain.hpp"
#include "lazyc/mcl/frontend.hpp"

#include "corpus.hpp"

#include <gtest/gtest.h>

using namespace lazyc;
using namespace lazyc::chain;

namespace {

std::shared_ptr<const wrap::LazyContract> counter_bundle() {
    wrap::LazyParams p;
    p.deposit = U256(100'000);
    p.window = 10;
    auto lc = wrap::wrap_contract(mcl::validate(mcl::parse(corpus::kCounter)), p);
    return std::make_shared<const wrap::LazyContract>(std::move(lc));
}

Transaction call_tx(const vm::Address& from, const vm::Address& to, const std::string& fname,
                    std::vector<vm::Value> args, uint64_t gas = 1'000'000, U256 price = U256(1),
                    U256 value = U256{}) {
    Transaction tx;
    tx.origin = from;
    tx.target = to;
    tx.entry = "call";
    tx.payload = txdata::plain_call(fname, args);
    tx.value = value;
    tx.gas_limit = gas;
    tx.gas_price = price;
    return tx;
}

ChainState fresh_chain() {
    ChainState c;
    c.genesis_mint(vm::Address{"alice"}, U256(10'000'000));
    c.genesis_mint(vm::Address{"bob"}, U256(10'000'000));
    return c;
}

TEST(ChainSim, SubmitAssignsFifoIds) {
    ChainState c = fresh_chain();
    c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
    uint64_t a = c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Counter"}, "Counter.inc", {}));
    uint64_t b = c.submit_tx(call_tx(vm::Address{"bob"}, vm::Address{"Counter"}, "Counter.inc", {}));
    EXPECT_EQ(a, 0u);
    EXPECT_EQ(b, 1u);
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 2u);
    EXPECT_EQ(rec.txs[0].id, 0u);
    EXPECT_EQ(rec.txs[1].id, 1u);
}

TEST(ChainSim, MalformedTransactionRejectedAtSubmit) {
    ChainState c = fresh_chain();
    Transaction tx;
    tx.origin = vm::Address{"alice"};
    tx.target = vm::Address{"x"};
    tx.entry = "";
    EXPECT_THROW(c.submit_tx(tx), MalformedTransaction);
    tx.entry = "call";
    tx.origin = vm::Address{};
    EXPECT_THROW(c.submit_tx(tx), MalformedTransaction);
}

TEST(ChainSim, UnknownTargetFailsAtMiningNotSubmission) {
    ChainState c = fresh_chain();
    uint64_t id = c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"ghost"}, "f", {}));
    EXPECT_EQ(id, 0u);
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 1u);
    EXPECT_EQ(rec.txs[0].status, TxStatus::Rejected);
    EXPECT_EQ(rec.txs[0].error, "TargetUnknown");
    EXPECT_EQ(rec.txs[0].fee, U256(0));
}

TEST(ChainSim, EmptyBlockJustAdvancesHeight) {
    ChainState c = fresh_chain();
    BlockReceipt rec = c.mine_block();
    EXPECT_EQ(rec.height, 1u);
    EXPECT_TRUE(rec.txs.empty());
    EXPECT_EQ(c.height, 1u);
}

// Fee arithmetic under a stubbed flat execution cost: gas 25,000 at price 2
// means the miner collects 50,000, the unspent 10,000 of the 60,000 deposit
// flows back, net debit 50,000.
TEST(ChainSim, ThreeCaseFeeArithmetic) {
    ChainState c = fresh_chain();
    c.sched.flat_tx_gas = 25'000;
    c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
    U256 before = c.account_balance(vm::Address{"alice"});
    c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Counter"}, "Counter.inc", {},
                        30'000, U256(2)));
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 1u);
    EXPECT_EQ(rec.txs[0].status, TxStatus::Success);
    EXPECT_EQ(rec.txs[0].gas_used, 25'000u);
    EXPECT_EQ(rec.txs[0].fee, U256(50'000));
    EXPECT_EQ(c.fee_sink, U256(50'000));
    EXPECT_EQ(c.account_balance(vm::Address{"alice"}), sub_exact(before, U256(50'000)));
}

TEST(ChainSim, OutOfGasForfeitsTheWholeDeposit) {
    ChainState c = fresh_chain();
    wrap::LazyParams p;
    p.deposit = U256(1);
    p.window = 10;
    auto spin = std::make_shared<const wrap::LazyContract>(
        wrap::wrap_contract(mcl::validate(mcl::parse(corpus::kSpin)), p));
    c.deploy_plain(vm::Address{"Spinner"}, spin);
    U256 before = c.account_balance(vm::Address{"alice"});
    c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Spinner"}, "Spinner.spin", {},
                        50'000, U256(3)));
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 1u);
    EXPECT_EQ(rec.txs[0].status, TxStatus::OutOfGas);
    EXPECT_EQ(rec.txs[0].gas_used, 50'000u);
    EXPECT_EQ(rec.txs[0].fee, U256(150'000));
    EXPECT_EQ(c.account_balance(vm::Address{"alice"}), sub_exact(before, U256(150'000)));
    // Revert semantics: no storage change.
    EXPECT_EQ(c.deployed.at(vm::Address{"Spinner"}).plain().storage,
              spin->initial_storage());
}

TEST(ChainSim, RevertRefundsValueAndChargesGas) {
    ChainState c = fresh_chain();
    auto comp = std::make_shared<const wrap::LazyContract>(wrap::wrap_contract(
        mcl::validate(mcl::parse(corpus::kCompetition)),
        [] { wrap::LazyParams p; p.deposit = U256(1); p.window = 1; return p; }()));
    c.deploy_plain(vm::Address{"Competition"}, comp);
    U256 before = c.account_balance(vm::Address{"alice"});
    // alice is not the owner: start() reverts, the attached value returns.
    c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Competition"},
                        "Competition.start", {vm::Value(U256(7))}, 1'000'000, U256(1),
                        U256(500)));
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 1u);
    EXPECT_EQ(rec.txs[0].status, TxStatus::Revert);
    U256 after = c.account_balance(vm::Address{"alice"});
    EXPECT_EQ(after, sub_exact(before, rec.txs[0].fee));
    EXPECT_EQ(c.account_balance(vm::Address{"Competition"}), U256(0));
}

TEST(ChainSim, BlockGasCapSkipsAndOverCapDrops) {
    ChainState c = fresh_chain();
    c.block_gas_cap = 100'000;
    c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
    auto tx = [&](uint64_t gas) {
        return call_tx(vm::Address{"alice"}, vm::Address{"Counter"}, "Counter.inc", {}, gas);
    };
    c.submit_tx(tx(60'000));  // fits
    c.submit_tx(tx(60'000));  // skipped this block (60k+60k > 100k)
    c.submit_tx(tx(150'000)); // beyond the cap entirely: flagged, dropped
    BlockReceipt first = c.mine_block();
    ASSERT_EQ(first.txs.size(), 2u);
    EXPECT_EQ(first.txs[0].status, TxStatus::Success);
    EXPECT_EQ(first.txs[1].status, TxStatus::OverCap);
    EXPECT_EQ(first.txs[1].id, 2u);
    EXPECT_EQ(c.mempool.size(), 1u); // the skipped one waits

    BlockReceipt second = c.mine_block();
    ASSERT_EQ(second.txs.size(), 1u);
    EXPECT_EQ(second.txs[0].id, 1u);
    EXPECT_EQ(second.txs[0].status, TxStatus::Success);
}

TEST(ChainSim, InsufficientFundsAndIntrinsicRejections) {
    ChainState c;
    c.genesis_mint(vm::Address{"poor"}, U256(10));
    c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
    c.submit_tx(call_tx(vm::Address{"poor"}, vm::Address{"Counter"}, "Counter.inc", {},
                        1'000'000, U256(1)));
    c.submit_tx(call_tx(vm::Address{"poor"}, vm::Address{"Counter"}, "Counter.inc", {},
                        100, U256(0)));
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs.size(), 2u);
    EXPECT_EQ(rec.txs[0].status, TxStatus::Rejected);
    EXPECT_EQ(rec.txs[0].error, "InsufficientFunds");
    EXPECT_EQ(rec.txs[1].status, TxStatus::Rejected);
    EXPECT_EQ(rec.txs[1].error, "IntrinsicTooLow");
}

TEST(ChainSim, ValueMovesOnPayableCall) {
    ChainState c = fresh_chain();
    auto comp = std::make_shared<const wrap::LazyContract>(wrap::wrap_contract(
        mcl::validate(mcl::parse(corpus::kCompetition)),
        [] { wrap::LazyParams p; p.deposit = U256(1); p.window = 1; return p; }()));
    c.deploy_plain(vm::Address{"Competition"}, comp);
    c.submit_tx(call_tx(vm::Address{"bob"}, vm::Address{"Competition"}, "Competition.start",
                        {vm::Value(U256(111))}, 1'000'000, U256(1), U256(100)));
    BlockReceipt rec = c.mine_block();
    ASSERT_EQ(rec.txs[0].status, TxStatus::Success);
    EXPECT_EQ(c.account_balance(vm::Address{"Competition"}), U256(100));
    EXPECT_EQ(c.deployed.at(vm::Address{"Competition"}).plain().storage
                  .at("Competition.desiredResult"),
              vm::Value(U256(111)));
}

TEST(ChainSim, AccountBalanceReads) {
    ChainState c;
    EXPECT_EQ(c.account_balance(vm::Address{"nobody"}), U256(0));
    c.genesis_mint(vm::Address{"alice"}, U256(1'000'000));
    EXPECT_EQ(c.account_balance(vm::Address{"alice"}), U256(1'000'000));
}

TEST(ChainSim, GenesisFileParsing) {
    ChainState c;
    c.load_genesis("# funding\nalice 1000\nbob 0x10\n\n");
    EXPECT_EQ(c.account_balance(vm::Address{"alice"}), U256(1000));
    EXPECT_EQ(c.account_balance(vm::Address{"bob"}), U256(16));
    EXPECT_EQ(c.genesis_total, U256(1016));
    EXPECT_THROW(c.load_genesis("alice"), MalformedTransaction);
    EXPECT_THROW(c.load_genesis("alice pudding"), MalformedTransaction);
}

TEST(ChainSim, DeterministicStateHashes) {
    auto run = [] {
        ChainState c = fresh_chain();
        c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
        std::vector<Digest> hashes;
        for (int i = 0; i < 5; ++i) {
            c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Counter"},
                                "Counter.add", {vm::Value(U256(uint64_t(i)))}));
            c.mine_block();
            hashes.push_back(c.state_hash());
        }
        return hashes;
    };
    EXPECT_EQ(run(), run());
}

TEST(ChainSim, ConservationHoldsAcrossMixedBlocks) {
    ChainState c = fresh_chain();
    c.deploy_plain(vm::Address{"Counter"}, counter_bundle());
    for (int i = 0; i < 10; ++i) {
        c.submit_tx(call_tx(vm::Address{"alice"}, vm::Address{"Counter"}, "Counter.inc", {}));
        c.submit_tx(call_tx(vm::Address{"bob"}, vm::Address{"Counter"}, "Counter.add",
                            {vm::Value(U256(3))}));
        EXPECT_NO_THROW(c.mine_block()); // mine_block audits internally
    }
    U256 total = c.fee_sink;
    for (const auto& [a, x] : c.accounts) total = add_exact(total, x);
    EXPECT_EQ(total, c.genesis_total);
}

} // namespace
