// lazyc: wrap MCL contracts into their lazy form, run protocol scenarios,
// and compare eager vs lazy gas usage.
//
// Exit codes: 0 success, 2 scenario/input error, 3 invariant violation.

#include "lazyc/chain/chain.hpp"
#include "lazyc/mcl/frontend.hpp"
#include "lazyc/sim/harness.hpp"
#include "lazyc/sim/scenario.hpp"
#include "lazyc/sim/workload.hpp"
#include "lazyc/wrap/lzc_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lazyc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_transform(const std::vector<std::string>& inputs, const std::string& out_path,
                  const wrap::LazyParams& params) {
    std::vector<mcl::ValidatedContract> contracts;
    for (const auto& path : inputs) contracts.push_back(mcl::validate(mcl::parse(slurp(path))));
    wrap::LazyContract lc = wrap::wrap_contract(std::move(contracts), params);
    std::vector<uint8_t> bytes = wrap::serialize_lzc(lc);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out.write((const char*)bytes.data(), (std::streamsize)bytes.size());
    std::cout << "wrapped " << inputs.size() << " contract(s), " << lc.rewritten.size()
              << " function(s), " << bytes.size() << " bytes -> " << out_path << "\n";
    return kExitOk;
}

int cmd_run(const std::string& scenario_path, const std::string& trace_path,
            const std::string& report_path, std::optional<uint64_t> seed) {
    sim::Harness harness = sim::load_harness(scenario_path);
    std::ofstream trace_file;
    if (!trace_path.empty()) {
        trace_file.open(trace_path, std::ios::binary);
        if (!trace_file) throw std::runtime_error("cannot write '" + trace_path + "'");
        harness.set_trace(&trace_file);
    }
    if (seed) harness.override_seed(*seed);
    sim::RunResult result = harness.run();
    std::cout << "blocks: " << result.blocks << ", transactions: " << result.tx_count
              << ", ledger entries: "
              << result.chain.find_lazy(result.lazy_address)->head_index()
              << ", verdicts: " << result.report.verdicts.size() << "\n";
    for (const auto& v : result.report.verdicts) {
        std::cout << "  " << v.kind << " at block " << v.block << ":";
        for (const auto& s : v.slashed) std::cout << " " << s;
        std::cout << "\n";
    }
    if (!report_path.empty()) {
        std::ofstream rf(report_path, std::ios::binary);
        if (!rf) throw std::runtime_error("cannot write '" + report_path + "'");
        rf << result.report.to_json_string();
    }
    return kExitOk;
}

int cmd_bench(const std::string& tmpl_name, uint64_t calls, const std::string& schedule_path,
              uint64_t seed, const std::string& report_path) {
    vm::GasSchedule sched;
    if (!schedule_path.empty()) sched = vm::parse_gas_schedule(slurp(schedule_path));
    sim::WorkloadTemplate tmpl = sim::workload_template_from_name(tmpl_name);
    sim::Workload w = sim::generate_workload(seed, tmpl, calls);
    sim::GasReport report = sim::run_benchmark(w, sched);
    std::cout << "template: " << sim::workload_template_name(tmpl) << ", calls: " << calls
              << "\n";
    std::cout << "total gas, eager: " << report.total_eager
              << ", lazy: " << report.total_lazy << "\n";
    if (report.saving_defined)
        std::cout << "saving: " << report.saving_percent << "%\n";
    else
        std::cout << "saving: undefined (no calls)\n";
    if (!report_path.empty()) {
        std::ofstream rf(report_path, std::ios::binary);
        if (!rf) throw std::runtime_error("cannot write '" + report_path + "'");
        rf << report.to_json_string();
    } else {
        std::cout << report.to_json_string();
    }
    return kExitOk;
}

int cmd_check(const std::string& scenario_path) {
    sim::Harness harness = sim::load_harness(scenario_path);
    (void)harness;
    std::cout << "scenario ok\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lazy-contract simulator"};
    app.require_subcommand(1);

    // transform
    auto* transform = app.add_subcommand("transform", "wrap MCL contracts into a .lzc bundle");
    std::vector<std::string> inputs;
    std::string out_path = "out.lzc";
    std::string deposit_str = "100000";
    uint64_t window = 100;
    std::optional<uint64_t> max_call_gas, max_total_gas, max_calls, checkpoint_every;
    transform->add_option("inputs", inputs, ".mcl source files")->required()->expected(-1);
    transform->add_option("-o,--output", out_path, "output .lzc path");
    transform->add_option("--deposit", deposit_str, "member deposit d")->required();
    transform->add_option("--window", window, "challenge window t in blocks")->required();
    transform->add_option("--max-call-gas", max_call_gas, "per-call gas ceiling");
    transform->add_option("--max-total-gas", max_total_gas, "per-user total gas ceiling");
    transform->add_option("--max-calls", max_calls, "total call-count ceiling");
    transform->add_option("--checkpoint-every", checkpoint_every,
                          "require a checkpoint before every k-th call");

    // run
    auto* run = app.add_subcommand("run", "execute a scenario");
    std::string scenario_path, trace_path, report_path;
    std::optional<uint64_t> seed_opt;
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--trace", trace_path, "write an ndjson trace here");
    run->add_option("--report", report_path, "write the JSON report here");
    run->add_option("--seed", seed_opt, "override the scenario seed");

    // bench
    auto* bench = app.add_subcommand("bench", "eager-vs-lazy gas comparison");
    std::string tmpl = "counter";
    uint64_t calls = 100;
    std::string schedule_path, bench_report_path;
    uint64_t bench_seed = 0;
    bench->add_option("--template", tmpl, "counter | escrow | loop-heavy | map-writer")
        ->required();
    bench->add_option("--calls", calls, "number of calls")->required();
    bench->add_option("--schedule", schedule_path, "gas schedule file");
    bench->add_option("--seed", bench_seed, "workload seed");
    bench->add_option("--report", bench_report_path, "write the JSON report here");

    // check
    auto* check = app.add_subcommand("check", "parse and validate a scenario");
    std::string check_path;
    check->add_option("scenario", check_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (transform->parsed()) {
            wrap::LazyParams params;
            auto d = lazyc::U256::parse(deposit_str);
            if (!d) throw std::runtime_error("bad --deposit value");
            params.deposit = *d;
            params.window = window;
            params.max_gas_per_call = max_call_gas;
            params.max_total_gas_per_user = max_total_gas;
            params.max_call_count = max_calls;
            params.checkpoint_interval = checkpoint_every;
            return cmd_transform(inputs, out_path, params);
        }
        if (run->parsed()) return cmd_run(scenario_path, trace_path, report_path, seed_opt);
        if (bench->parsed())
            return cmd_bench(tmpl, calls, schedule_path, bench_seed, bench_report_path);
        if (check->parsed()) return cmd_check(check_path);
    } catch (const chain::AuditError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
