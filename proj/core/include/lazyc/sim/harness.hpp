#pragma once

#include "lazyc/chain/chain.hpp"
#include "lazyc/party/replica.hpp"
#include "lazyc/party/strategy.hpp"
#include "lazyc/sim/report.hpp"
#include "lazyc/sim/scenario.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

namespace lazyc::sim {

// Net wealth movement of one party across a run. Own transaction fees and
// voluntary contract payments are added back, so an honest party's net is
// never negative: the protocol must not cost them anything.
struct PartyNet {
    U256 genesis;
    U256 acct_end;
    U256 fees_paid;
    U256 payments_made;
    U256 b_end;
    U256 deposit_end;
    U256 claims_end;
    bool slashed = false;

    // (acct_end + b_end + deposit_end + claims_end + fees + payments) vs genesis
    bool net_nonnegative() const;
    std::string describe() const;
};

struct RunResult {
    uint64_t blocks = 0;
    uint64_t tx_count = 0;
    GasReport report;
    chain::ChainState chain;
    std::map<std::string, party::Replica> replicas;
    std::map<std::string, PartyNet> nets;
    vm::Address lazy_address;
    std::shared_ptr<const wrap::LazyContract> program;
};

// Runs one scenario: deploys the wrapped bundle, feeds timeline directives
// and strategy-generated transactions block by block, keeps every party's
// replica in sync, audits conservation after each block and collects the
// trace and gas report.
class Harness {
public:
    Harness(Scenario scenario, std::vector<std::string> contract_sources);

    void set_trace(std::ostream* os) { trace_ = os; }
    void override_seed(uint64_t seed) { sc_.seed = seed; }

    RunResult run();

    static constexpr const char* kLazyAddress = "L";

private:
    Scenario sc_;
    std::vector<std::string> sources_;
    std::ostream* trace_ = nullptr;
};

// Reads the scenario and its referenced files from disk; paths resolve
// relative to the scenario file's directory.
Harness load_harness(const std::string& scenario_path);

// Replays every remaining ledger entry on a copy of the wrapper state,
// regardless of disputes: the test oracle for replay equivalence.
std::pair<vm::Storage, vm::Balances> force_full_replay(const chain::ChainState& chain,
                                                       const vm::Address& lazy_address);

} // namespace lazyc::sim
