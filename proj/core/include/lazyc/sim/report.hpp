#pragma once

#include "lazyc/u256.hpp"

#include <string>
#include <vector>

namespace lazyc::sim {

struct TxGasRecord {
    std::string entry;
    uint64_t gas_eager = 0;
    uint64_t gas_lazy = 0;
};

struct VerdictRecord {
    uint64_t block = 0;
    uint64_t dispute_index = 0;
    std::string kind;          // "verdict" or "timeout"
    std::vector<std::string> slashed;
    std::string dishonest;     // verdicts only
};

// Gas accounting emitted by runs and benchmarks. Benchmarks fill both gas
// columns; scenario runs only the lazy one (saving stays undefined).
struct GasReport {
    uint64_t seed = 0;
    uint64_t blocks = 0;
    uint64_t tx_count = 0;
    bool has_eager_leg = false;
    std::vector<TxGasRecord> per_tx;
    uint64_t total_eager = 0;
    uint64_t total_lazy = 0;
    uint64_t lazy_overhead_gas = 0; // joins + funding deposits, benchmark leg only
    bool saving_defined = false;
    double saving_percent = 0.0;
    double mean_saving_percent = 0.0;
    double median_saving_percent = 0.0;
    std::vector<VerdictRecord> verdicts;
    std::vector<std::string> flags;

    // Recomputes totals/saving/statistics from per_tx.
    void finalize();

    std::string to_json_string() const; // stable key order, 2-space indent
};

} // namespace lazyc::sim
