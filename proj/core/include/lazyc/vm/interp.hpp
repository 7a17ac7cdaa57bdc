#pragma once

#include "lazyc/mcl/ast.hpp"
#include "lazyc/sha256.hpp"
#include "lazyc/vm/gas.hpp"
#include "lazyc/vm/value.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lazyc::vm {

struct CallEnv {
    Address msg_sender;
    U256 msg_value;          // attached currency; zero for non-payable calls
    uint64_t block_number = 0;
    uint64_t gas_limit = 0;  // execution budget, intrinsic charged by the chain
    U256 gas_price;          // currency per gas unit
};

// Globals recorded in a ledger entry; only the fields a function actually
// uses are present.
struct GlobalsSnapshot {
    std::optional<uint64_t> block_number;
    std::optional<Address> msg_sender;
    std::optional<U256> msg_value;

    friend bool operator==(const GlobalsSnapshot&, const GlobalsSnapshot&) = default;
};

enum class Outcome : uint8_t { Success, Revert, OutOfGas };

const char* outcome_name(Outcome o);

struct SignedAmount {
    bool negative = false;
    U256 magnitude;
    friend bool operator==(const SignedAmount&, const SignedAmount&) = default;
};

struct ExecutionResult {
    Outcome outcome = Outcome::Success;
    uint64_t gas_used = 0;
    Storage storage_after;    // pre-state on Revert/OutOfGas
    Balances balances_after;  // pre-state on Revert/OutOfGas
    std::map<Address, SignedAmount> balance_deltas; // empty unless Success
    std::string revert_reason; // diagnostic only, not part of consensus state
};

// Caller misuse (argument arity/type mismatch); never a chain-level outcome.
struct ArgumentMismatch : std::invalid_argument {
    explicit ArgumentMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A node family reached in the wrong mode or an unresolved callee: a bug,
// not a user error.
struct InternalInvariantViolation : std::logic_error {
    explicit InternalInvariantViolation(const std::string& what) : std::logic_error(what) {}
};

// Dispatch target for internal calls within a wrapped bundle.
struct BundleFn {
    const mcl::FunctionDef* fn = nullptr;
    Address self; // owning contract's address
};

struct VmHost {
    const GasSchedule* schedule = nullptr;
    const HashFn* hash = nullptr;
    // Qualified "Contract.fn" dispatch table; may be null when the executed
    // function makes no internal calls.
    const std::map<std::string, BundleFn>* functions = nullptr;
};

// Deploy-time storage: every state variable at its literal initializer or
// typed default, keyed "Contract.var".
Storage initial_storage(const mcl::ContractDef& c);

// Executes one function call transactionally: Success commits the returned
// storage/balances, Revert and OutOfGas return the untouched pre-state.
// `snapshot` selects the mode: null runs original (eager) bodies against
// real balances and env globals; non-null runs rewritten bodies against
// virtual b[.] balances and the recorded globals.
ExecutionResult execute_call(const VmHost& host,
                             const mcl::FunctionDef& f,
                             const Address& self,
                             std::span<const Value> args,
                             const CallEnv& env,
                             const Storage& storage_before,
                             const Balances& balances_before,
                             const GlobalsSnapshot* snapshot = nullptr,
                             GasTrace* trace = nullptr);

} // namespace lazyc::vm
