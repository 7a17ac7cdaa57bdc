#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>
#include <string>
#include <string_view>

namespace lazyc::vm {

// Per-construct gas costs, in gas units. The interpreter charges nodes in
// pre-order: a node's own cost first, then its children left to right.
//
//   literals, `this`           free
//   local/param read, write    local_read / local_write
//   global read (eager)        local_read
//   state scalar read          storage_read
//   map entry read             storage_read (plus key evaluation)
//   snapshot global (lazy)     storage_read
//   virtual balance b[.]       storage_read / storage write rule
//   state write                storage_write_new when the slot was
//                              zero/absent and the new value is not,
//                              storage_write_update otherwise
//   arithmetic node            arith_op
//   comparison, !, &&, ||      compare_op (short-circuit skips the rhs)
//   hash(e)                    hash_op
//   balance(e) (eager)         balance_read
//   require(e)                 require_op, then e
//   transfer(p, x) (eager)     transfer_op, then p, then x
//   while                      loop_iteration_overhead per condition check
//   internal call              internal_call per dispatch
//
// Writes charge after the stored value is computed (the new/update rule
// needs it); every other node charges before its children. Binding of call
// arguments is free (covered by the transaction's intrinsic cost,
// call_base + per_byte * payload size).
struct GasSchedule {
    uint64_t arith_op = 3;
    uint64_t compare_op = 3;
    uint64_t local_read = 3;
    uint64_t local_write = 3;
    uint64_t storage_read = 200;
    uint64_t storage_write_new = 20000;
    uint64_t storage_write_update = 5000;
    uint64_t hash_op = 30;
    uint64_t balance_read = 200;
    uint64_t transfer_op = 9000;
    uint64_t require_op = 10;
    uint64_t loop_iteration_overhead = 1;
    uint64_t call_base = 21000;
    uint64_t per_byte = 16;
    uint64_t internal_call = 700;

    // Test stub: when nonzero, every mined transaction reports exactly this
    // gas usage and contract calls replay under the block cap instead of
    // their own metering. Mirrors worked examples that assume a flat
    // per-call cost.
    uint64_t flat_tx_gas = 0;

    // call_base + per_byte * payload_bytes, charged before execution.
    uint64_t intrinsic_gas(uint64_t payload_bytes) const {
        return call_base + per_byte * payload_bytes;
    }
};

// Per-node cost record used by the gas-accounting oracle tests.
struct GasTraceItem {
    const char* tag;
    uint64_t cost;
};
using GasTrace = std::vector<GasTraceItem>;

// Thrown when a charge would exceed the budget; the meter is left pinned
// at its limit (an exhausted call consumes everything it was given).
struct OutOfGas {};

struct GasMeter {
    uint64_t limit = 0;
    uint64_t used = 0;
    GasTrace* trace = nullptr;

    void charge(uint64_t cost, const char* tag) {
        if (used + cost > limit) {
            used = limit;
            throw OutOfGas{};
        }
        used += cost;
        if (trace) trace->push_back(GasTraceItem{tag, cost});
    }
    uint64_t remaining() const { return limit - used; }
};

// Parses `key = value` lines with '#' comments. Unknown keys and
// non-positive costs (flat_tx_gas and per_byte may be zero) are rejected;
// storage costs must exceed local costs.
GasSchedule parse_gas_schedule(std::string_view text);

std::string format_gas_schedule(const GasSchedule& s);

struct GasScheduleError : std::runtime_error {
    explicit GasScheduleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lazyc::vm
