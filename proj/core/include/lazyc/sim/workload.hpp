#pragma once

#include "lazyc/sim/report.hpp"
#include "lazyc/vm/gas.hpp"
#include "lazyc/vm/value.hpp"

#include <string>
#include <vector>

namespace lazyc::sim {

enum class WorkloadTemplate : uint8_t {
    Counter,   // one storage update per call: the wrapper can only lose
    Escrow,    // hash-puzzle shape: payable starts, reward guesses, cancels
    LoopHeavy, // a thousand storage writes per call: the wrapper shines
    MapWriter, // per-address map updates
};

WorkloadTemplate workload_template_from_name(const std::string& name);
const char* workload_template_name(WorkloadTemplate t);

struct WorkloadCall {
    std::string party;
    std::string fname; // unqualified; both legs resolve it identically
    std::vector<vm::Value> args;
    U256 payment;
    uint64_t gas_limit = 0;
};

// A deterministic call mix against one template contract; both benchmark
// legs replay it byte-for-byte.
struct Workload {
    uint64_t seed = 0;
    WorkloadTemplate tmpl = WorkloadTemplate::Counter;
    std::string contract_source;
    std::vector<std::string> parties;
    std::vector<WorkloadCall> calls;
    U256 funding_per_party; // b[.] funding for the lazy leg
};

Workload generate_workload(uint64_t seed, WorkloadTemplate tmpl, uint64_t n_calls);

// Replays the workload twice under the same schedule: directly against the
// deployed original, and as lazy call requests with no dispute; reports the
// per-call gas columns and the saving.
GasReport run_benchmark(const Workload& workload, const vm::GasSchedule& sched);

} // namespace lazyc::sim
