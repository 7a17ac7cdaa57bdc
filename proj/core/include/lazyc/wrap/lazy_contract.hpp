#pragma once

#include "lazyc/mcl/frontend.hpp"
#include "lazyc/u256.hpp"
#include "lazyc/vm/interp.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lazyc::wrap {

// Deployment parameters of a wrapper contract.
struct LazyParams {
    U256 deposit;                 // d: per-member security deposit
    uint64_t window = 0;          // t: challenge / bidding / step deadline, in blocks
    std::optional<uint64_t> max_total_gas_per_user;
    std::optional<uint64_t> max_gas_per_call;
    std::optional<uint64_t> max_call_count;
    std::optional<uint64_t> checkpoint_interval; // k: checkpoint before every k-th call

    friend bool operator==(const LazyParams&, const LazyParams&) = default;
};

enum class WrapErrorKind : uint8_t {
    ExternalCallError, // callee contract outside the wrapped bundle
    NameCollision,     // two bundled contracts share a name
    AlreadyRewritten,  // rewrite applied to a rewritten function
    UnknownFunction,   // cross-contract callee does not exist
    BadCall,           // cross-contract signature mismatch or payable callee
    BadParams,         // invalid LazyParams
};

struct WrapError : std::runtime_error {
    WrapErrorKind kind;
    WrapError(WrapErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind(kind) {}
};

// The wrapper program: every original function in its private rewritten
// form, keyed by qualified "Contract.fn" name. Move-only; share via
// shared_ptr<const LazyContract> (dispatch tables point into the maps).
struct LazyContract {
    std::vector<mcl::ValidatedContract> originals;
    std::map<std::string, mcl::FunctionDef> rewritten;
    // Snapshot requirement per qualified function: syntactic usage closed
    // over internal calls, so a callee's globals are recorded too.
    std::map<std::string, mcl::GlobalsUsage> usage;
    LazyParams params;

    LazyContract() = default;
    LazyContract(LazyContract&&) = default;
    LazyContract& operator=(LazyContract&&) = default;
    LazyContract(const LazyContract&) = delete;
    LazyContract& operator=(const LazyContract&) = delete;

    // Dispatch tables for the VM; entries point into this object.
    std::map<std::string, vm::BundleFn> rewritten_table() const;
    std::map<std::string, vm::BundleFn> original_table() const;

    // Union of the bundled contracts' deploy-time storage.
    vm::Storage initial_storage() const;

    const mcl::FunctionDef* find_rewritten(const std::string& qualified) const;
    const mcl::GlobalsUsage* find_usage(const std::string& qualified) const;

    // Resolves a possibly-unqualified function name to its qualified form;
    // nullopt when missing or ambiguous.
    std::optional<std::string> resolve_function(const std::string& name) const;
};

// Rewrites one validated function per the wrapper's substitution rules:
// balance(e) becomes b[e], transfer(p, x) becomes the paired b updates,
// every global v becomes a snapshot lookup, payable bodies gain the
// b[C] += value / b[sender] -= value prologue, and the function gains a
// leading ledger-index parameter. Throws WrapError(AlreadyRewritten) when
// f is already in rewritten form.
mcl::FunctionDef rewrite_function(const mcl::FunctionDef& f, const mcl::GlobalsUsage& usage);

// Bundles one or more validated contracts into a wrapper program. Internal
// calls must resolve within the bundle.
LazyContract wrap_contract(std::vector<mcl::ValidatedContract> contracts,
                           const LazyParams& params);

inline LazyContract wrap_contract(mcl::ValidatedContract contract, const LazyParams& params) {
    std::vector<mcl::ValidatedContract> v;
    v.push_back(std::move(contract));
    return wrap_contract(std::move(v), params);
}

template <typename... Cs>
std::vector<mcl::ValidatedContract> bundle_of(Cs&&... contracts) {
    std::vector<mcl::ValidatedContract> v;
    (v.push_back(std::forward<Cs>(contracts)), ...);
    return v;
}

} // namespace lazyc::wrap
