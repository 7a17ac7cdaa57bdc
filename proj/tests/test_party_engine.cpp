#include "lazyc/party/replica.hpp"
#include "lazyc/party/strategy.hpp"
#include "lazyc/mcl/frontend.hpp"

#include "corpus.hpp"
#include "equivalence.hpp"

#include <gtest/gtest.h>

using namespace lazyc;
using namespace lazyc::party;
using namespace lazyc::proto;

namespace {

const vm::Address kAlice{"alice"};
const vm::Address kBob{"bob"};

std::shared_ptr<const wrap::LazyContract> competition_program() {
    wrap::LazyParams p;
    p.deposit = U256(100'000);
    p.window = 100;
    return std::make_shared<const wrap::LazyContract>(
        wrap::wrap_contract(mcl::validate(mcl::parse(corpus::kCompetition)), p));
}

LedgerEntry deposit_entry(uint64_t index, const vm::Address& who, uint64_t amount,
                          uint64_t block = 1) {
    LedgerEntry e;
    e.index = index;
    e.block = block;
    e.body = DepositEntry{who, U256(amount)};
    return e;
}

LedgerEntry call_entry(uint64_t index, const vm::Address& who, const std::string& fname,
                       std::vector<vm::Value> args, uint64_t payment,
                       vm::GlobalsSnapshot snap, uint64_t block = 1) {
    LedgerEntry e;
    e.index = index;
    e.block = block;
    CallRequestEntry c;
    c.party = who;
    c.fname = fname;
    c.gas_limit = 100'000;
    c.args = std::move(args);
    c.payment = U256(payment);
    c.snapshot = std::move(snap);
    e.body = std::move(c);
    return e;
}

LedgerEntry withdraw_entry(uint64_t index, const vm::Address& who, uint64_t amount,
                           uint64_t block = 1) {
    LedgerEntry e;
    e.index = index;
    e.block = block;
    e.body = WithdrawRequestEntry{who, U256(amount)};
    return e;
}

TEST(Replica, AppliesTheWalkthroughPrefix) {
    auto program = competition_program();
    vm::GasSchedule sched;
    Replica r = Replica::create(kBob, program, sched, default_hash());

    r.apply_entry(deposit_entry(1, kBob, 100));
    EXPECT_EQ(vm::balance_of(r.balances_view, kBob), U256(100));

    vm::GlobalsSnapshot snap_start;
    snap_start.msg_sender = kBob;
    snap_start.msg_value = U256(100);
    r.apply_entry(call_entry(2, kBob, "Competition.start", {vm::Value(U256(111))}, 100,
                             snap_start));
    EXPECT_EQ(vm::balance_of(r.balances_view, kBob), U256(0));
    EXPECT_EQ(vm::balance_of(r.balances_view, vm::Address{"Competition"}), U256(100));
    EXPECT_EQ(r.storage_view.at("Competition.desiredResult"), vm::Value(U256(111)));

    vm::GlobalsSnapshot snap_reward;
    snap_reward.msg_sender = kAlice;
    snap_reward.block_number = 12110;
    r.apply_entry(call_entry(3, kAlice, "Competition.getReward", {vm::Value(U256(1234))}, 0,
                             snap_reward));
    // hash(12110 + 1234) is nowhere near 111: no payout.
    EXPECT_EQ(vm::balance_of(r.balances_view, kAlice), U256(0));
    EXPECT_EQ(r.next_index, 4u);
}

TEST(Replica, GapDetection) {
    auto program = competition_program();
    Replica r = Replica::create(kBob, program, {}, default_hash());
    EXPECT_THROW(r.apply_entry(deposit_entry(2, kBob, 5)), GapInLedger);
    r.apply_entry(deposit_entry(1, kBob, 5));
    EXPECT_THROW(r.apply_entry(deposit_entry(1, kBob, 5)), GapInLedger);
}

TEST(Replica, FraudDetectionExamples) {
    auto program = competition_program();
    Replica r = Replica::create(kBob, program, {}, default_hash());
    r.apply_entry(deposit_entry(1, kAlice, 100));

    // Exactly the balance: valid.
    EXPECT_FALSE(r.detect_fraud(withdraw_entry(2, kAlice, 100)));
    // One over: fraud. Zero balance against any positive: fraud.
    EXPECT_TRUE(r.detect_fraud(withdraw_entry(2, kAlice, 101)));
    EXPECT_TRUE(r.detect_fraud(withdraw_entry(2, kBob, 1)));

    // Judging an entry the replica has not reached is refused.
    EXPECT_THROW(r.detect_fraud(withdraw_entry(5, kAlice, 1)), ReplicaBehind);
}

TEST(Replica, ConvergenceAcrossPermutedConstruction) {
    // Two replicas fed the same prefix are bitwise identical, regardless of
    // who owns them.
    auto program = competition_program();
    std::vector<LedgerEntry> entries;
    entries.push_back(deposit_entry(1, kBob, 100));
    vm::GlobalsSnapshot s1;
    s1.msg_sender = kBob;
    s1.msg_value = U256(40);
    entries.push_back(call_entry(2, kBob, "Competition.start", {vm::Value(U256(9))}, 40, s1));
    entries.push_back(withdraw_entry(3, kBob, 30));
    vm::GlobalsSnapshot s2;
    s2.msg_sender = kAlice;
    s2.block_number = 777;
    entries.push_back(call_entry(4, kAlice, "Competition.getReward", {vm::Value(U256(3))}, 0, s2));

    Replica a = Replica::create(kAlice, program, {}, default_hash());
    Replica b = Replica::create(kBob, program, {}, default_hash());
    for (const auto& e : entries) {
        a.apply_entry(e);
        b.apply_entry(e);
    }
    EXPECT_EQ(a.storage_view, b.storage_view);
    EXPECT_EQ(a.balances_view, b.balances_view);
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_EQ(a.next_index, b.next_index);
}

TEST(Replica, PaymentGuardMatchesSimulateSemantics) {
    auto program = competition_program();
    Replica r = Replica::create(kBob, program, {}, default_hash());
    r.apply_entry(deposit_entry(1, kBob, 50));
    // Payment exceeds b[bob]: the call is ignored entirely.
    vm::GlobalsSnapshot snap;
    snap.msg_sender = kBob;
    snap.msg_value = U256(80);
    proto::ReplayResult res = r.apply_entry(
        call_entry(2, kBob, "Competition.start", {vm::Value(U256(1))}, 80, snap));
    EXPECT_TRUE(res.ignored);
    EXPECT_EQ(vm::balance_of(r.balances_view, kBob), U256(50));
    EXPECT_EQ(r.storage_view.at("Competition.desiredResult"), vm::Value(U256(0)));
}

TEST(Replica, WithdrawDebitsAtRequestTime) {
    auto program = competition_program();
    Replica r = Replica::create(kBob, program, {}, default_hash());
    r.apply_entry(deposit_entry(1, kAlice, 100));
    proto::ReplayResult res = r.apply_entry(withdraw_entry(2, kAlice, 60));
    EXPECT_TRUE(res.would_pay);
    EXPECT_EQ(vm::balance_of(r.balances_view, kAlice), U256(40));
    // Insufficient request is ignored, balance untouched.
    proto::ReplayResult res2 = r.apply_entry(withdraw_entry(3, kAlice, 60));
    EXPECT_TRUE(res2.ignored);
    EXPECT_EQ(vm::balance_of(r.balances_view, kAlice), U256(40));
}

TEST(Strategy, ScriptedEmitsNothing) {
    Strategy s(kBob, StrategyConfig{});
    Observation obs;
    obs.block = 5;
    EXPECT_TRUE(s.step(obs).empty());
}

// Semantic preservation spot check; the acceptance suite runs the full
// thousand-case sweep.
TEST(Equivalence, RewrittenMatchesOriginalOnRandomCases) {
    wrap::LazyParams p;
    p.deposit = U256(1);
    p.window = 1;
    for (const char* src : {corpus::kCompetition, corpus::kCounter, corpus::kLedgerMap}) {
        wrap::LazyContract lc = wrap::wrap_contract(mcl::validate(mcl::parse(src)), p);
        equiv::Generator gen(lc);
        Prng rng(0xfeed);
        for (int i = 0; i < 100; ++i) {
            equiv::CaseResult r = gen.run_case(rng);
            ASSERT_TRUE(r.matched) << src << " case " << i;
        }
    }
}

} // namespace
