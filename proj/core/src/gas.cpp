#include "lazyc/vm/gas.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lazyc::vm {

namespace {

std::map<std::string, uint64_t GasSchedule::*> schedule_fields() {
    return {
        {"arith_op", &GasSchedule::arith_op},
        {"compare_op", &GasSchedule::compare_op},
        {"local_read", &GasSchedule::local_read},
        {"local_write", &GasSchedule::local_write},
        {"storage_read", &GasSchedule::storage_read},
        {"storage_write_new", &GasSchedule::storage_write_new},
        {"storage_write_update", &GasSchedule::storage_write_update},
        {"hash_op", &GasSchedule::hash_op},
        {"balance_read", &GasSchedule::balance_read},
        {"transfer_op", &GasSchedule::transfer_op},
        {"require_op", &GasSchedule::require_op},
        {"loop_iteration_overhead", &GasSchedule::loop_iteration_overhead},
        {"call_base", &GasSchedule::call_base},
        {"per_byte", &GasSchedule::per_byte},
        {"internal_call", &GasSchedule::internal_call},
        {"flat_tx_gas", &GasSchedule::flat_tx_gas},
    };
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

GasSchedule parse_gas_schedule(std::string_view text) {
    GasSchedule s;
    auto fields = schedule_fields();
    size_t lineno = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw GasScheduleError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string_view val = trim(line.substr(eq + 1));
        auto it = fields.find(key);
        if (it == fields.end())
            throw GasScheduleError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        uint64_t parsed = 0;
        auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), parsed);
        if (ec != std::errc{} || p != val.data() + val.size())
            throw GasScheduleError("line " + std::to_string(lineno) + ": bad integer '" +
                                   std::string(val) + "'");
        s.*(it->second) = parsed;
    }

    auto positive = [&](uint64_t v, const char* name) {
        if (v == 0) throw GasScheduleError(std::string(name) + " must be positive");
    };
    positive(s.arith_op, "arith_op");
    positive(s.compare_op, "compare_op");
    positive(s.local_read, "local_read");
    positive(s.local_write, "local_write");
    positive(s.storage_read, "storage_read");
    positive(s.storage_write_new, "storage_write_new");
    positive(s.storage_write_update, "storage_write_update");
    positive(s.hash_op, "hash_op");
    positive(s.balance_read, "balance_read");
    positive(s.transfer_op, "transfer_op");
    positive(s.require_op, "require_op");
    positive(s.loop_iteration_overhead, "loop_iteration_overhead");
    positive(s.call_base, "call_base");
    positive(s.internal_call, "internal_call");
    if (s.storage_read <= s.local_read || s.storage_write_update <= s.local_write ||
        s.storage_write_new <= s.local_write)
        throw GasScheduleError("storage costs must exceed local costs");
    return s;
}

std::string format_gas_schedule(const GasSchedule& s) {
    std::ostringstream os;
    GasSchedule copy = s;
    for (const auto& [name, field] : schedule_fields())
        os << name << " = " << copy.*field << "\n";
    return os.str();
}

} // namespace lazyc::vm
