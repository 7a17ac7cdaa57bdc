#include "lazyc/sim/report.hpp"

#include <json.hpp>

#include <algorithm>

namespace lazyc::sim {

void GasReport::finalize() {
    total_eager = 0;
    total_lazy = 0;
    tx_count = per_tx.size();
    std::vector<double> savings;
    for (const auto& row : per_tx) {
        total_eager += row.gas_eager;
        total_lazy += row.gas_lazy;
        if (has_eager_leg && row.gas_eager > 0)
            savings.push_back(100.0 * (1.0 - double(row.gas_lazy) / double(row.gas_eager)));
    }
    saving_defined = has_eager_leg && total_eager > 0;
    if (saving_defined) {
        saving_percent = 100.0 * (1.0 - double(total_lazy) / double(total_eager));
    } else {
        saving_percent = 0.0;
        if (has_eager_leg) flags.push_back("no_calls");
    }
    if (!savings.empty()) {
        double sum = 0;
        for (double s : savings) sum += s;
        mean_saving_percent = sum / double(savings.size());
        std::vector<double> sorted = savings;
        std::sort(sorted.begin(), sorted.end());
        size_t n = sorted.size();
        median_saving_percent =
            n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    }
}

std::string GasReport::to_json_string() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["blocks"] = blocks;
    j["tx_count"] = tx_count;
    j["totals"] = {{"eager", total_eager}, {"lazy", total_lazy}};
    j["lazy_overhead_gas"] = lazy_overhead_gas;
    j["saving_defined"] = saving_defined;
    j["saving_percent"] = saving_percent;
    j["stats"] = {{"mean_saving_percent", mean_saving_percent},
                  {"median_saving_percent", median_saving_percent}};
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) {
        nlohmann::ordered_json rec;
        rec["block"] = v.block;
        rec["dispute_index"] = v.dispute_index;
        rec["kind"] = v.kind;
        rec["slashed"] = v.slashed;
        rec["dishonest"] = v.dishonest;
        j["verdicts"].push_back(rec);
    }
    j["flags"] = flags;
    j["per_tx"] = nlohmann::ordered_json::array();
    for (const auto& row : per_tx) {
        nlohmann::ordered_json rec;
        rec["entry"] = row.entry;
        if (has_eager_leg) rec["gas_eager"] = row.gas_eager;
        rec["gas_lazy"] = row.gas_lazy;
        j["per_tx"].push_back(rec);
    }
    return j.dump(2) + "\n";
}

} // namespace lazyc::sim
