#pragma once

#include "lazyc/party/strategy.hpp"
#include "lazyc/vm/gas.hpp"
#include "lazyc/wrap/lazy_contract.hpp"

#include <string>
#include <vector>

namespace lazyc::sim {

struct ScenarioError : std::runtime_error {
    uint64_t line;
    ScenarioError(uint64_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
};

struct Directive {
    uint64_t block = 0;
    std::string party;
    std::string action;
    std::vector<std::string> args;
    uint64_t line = 0;
};

struct PartyDecl {
    std::string name;
    party::StrategyConfig config;
};

// Line-oriented scenario script:
//   param <key> <value>       deposit, window, max_call_gas, max_total_gas,
//                             max_calls, checkpoint_every, flat_tx_gas,
//                             block_gas_cap, seed, horizon, gas_price,
//                             gas_limit
//   genesis <name> <amount>
//   genesis_file <path>
//   contract <path.mcl>
//   party <name> <strategy>[:k=v[,k=v]...]
//   @block <N> <party> <action> [args...]
// Comments start with '#'. Directive blocks must be non-decreasing.
struct Scenario {
    wrap::LazyParams params{U256(100'000), 100, {}, {}, {}, {}};
    vm::GasSchedule sched;
    uint64_t block_gas_cap = 30'000'000;
    uint64_t seed = 0;
    uint64_t horizon = 0; // 0: derived from the timeline and window
    U256 default_gas_price{1};
    uint64_t default_gas_limit = 2'000'000;
    std::vector<std::pair<std::string, U256>> genesis;
    std::vector<std::string> genesis_files;
    std::vector<std::string> contract_paths;
    std::vector<PartyDecl> cast;
    std::vector<Directive> timeline;

    const PartyDecl* find_party(const std::string& name) const;
};

Scenario parse_scenario(std::string_view text);

// Directive actions and their arguments, as accepted by the harness:
//   join | deposit AMT | call FNAME GAS [pay AMT] ARG... | withdraw AMT |
//   finalize J | challenge J | bid J PRICE | simulate K | reportTimeout J |
//   leave | checkpoint | claimGas
bool is_known_action(const std::string& action);

} // namespace lazyc::sim
