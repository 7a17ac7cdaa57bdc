#include "lazyc/sim/harness.hpp"

#include "lazyc/mcl/frontend.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <ostream>
#include <sstream>

namespace lazyc::sim {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct PartyRuntime {
    std::string name;
    vm::Address address;
    party::Strategy strategy;
    party::Replica replica;
    std::vector<party::LedgerEvent> pending_events;
};

// One record per mined block, in the published receipt shape.
ordered_json receipt_json(const chain::BlockReceipt& block) {
    ordered_json j;
    j["event"] = "receipt";
    j["height"] = block.height;
    j["txs"] = ordered_json::array();
    for (const auto& r : block.txs) {
        ordered_json t;
        t["id"] = r.id;
        t["origin"] = r.origin.label;
        t["entry"] = r.entry;
        t["outcome"] = chain::tx_status_name(r.status);
        t["gas_used"] = r.gas_used;
        t["fee"] = r.fee.to_dec();
        if (!r.error.empty()) t["error"] = r.error;
        j["txs"].push_back(t);
    }
    return j;
}

ordered_json entry_json(const proto::LedgerEntry& e) {
    ordered_json j;
    j["event"] = "entry";
    j["index"] = e.index;
    j["block"] = e.block;
    j["kind"] = e.kind_name();
    j["party"] = e.author().label;
    switch (e.body.index()) {
    case 0:
        j["amount"] = e.deposit().amount.to_dec();
        break;
    case 1: {
        const auto& c = e.call();
        j["fname"] = c.fname;
        j["gas_limit"] = c.gas_limit;
        j["payment"] = c.payment.to_dec();
        ordered_json args = ordered_json::array();
        for (const auto& a : c.args) args.push_back(vm::to_string(a));
        j["args"] = args;
        ordered_json snap;
        if (c.snapshot.block_number) snap["block_number"] = *c.snapshot.block_number;
        if (c.snapshot.msg_sender) snap["msg_sender"] = c.snapshot.msg_sender->label;
        if (c.snapshot.msg_value) snap["msg_value"] = c.snapshot.msg_value->to_dec();
        j["snapshot"] = snap;
        break;
    }
    case 2:
        j["amount"] = e.withdraw().amount.to_dec();
        break;
    default: {
        std::string hex;
        for (uint8_t b : e.checkpoint().state_hash) {
            hex.push_back("0123456789abcdef"[b >> 4]);
            hex.push_back("0123456789abcdef"[b & 0xF]);
        }
        j["state_hash"] = hex;
        break;
    }
    }
    return j;
}

} // namespace

bool PartyNet::net_nonnegative() const {
    U256 wealth = acct_end;
    wealth = add_exact(wealth, b_end);
    wealth = add_exact(wealth, deposit_end);
    wealth = add_exact(wealth, claims_end);
    wealth = add_exact(wealth, fees_paid);
    wealth = add_exact(wealth, payments_made);
    return wealth >= genesis;
}

std::string PartyNet::describe() const {
    std::ostringstream os;
    os << "genesis=" << genesis.to_dec() << " acct=" << acct_end.to_dec()
       << " b=" << b_end.to_dec() << " deposit=" << deposit_end.to_dec()
       << " claims=" << claims_end.to_dec() << " fees=" << fees_paid.to_dec()
       << " payments=" << payments_made.to_dec() << (slashed ? " (slashed)" : "");
    return os.str();
}

Harness::Harness(Scenario scenario, std::vector<std::string> contract_sources)
    : sc_(std::move(scenario)), sources_(std::move(contract_sources)) {}

Harness load_harness(const std::string& scenario_path) {
    std::string text = read_file(scenario_path);
    Scenario sc = parse_scenario(text);
    std::filesystem::path base = std::filesystem::path(scenario_path).parent_path();
    std::vector<std::string> sources;
    for (const auto& rel : sc.contract_paths)
        sources.push_back(read_file((base / rel).string()));
    std::vector<std::string> genesis_texts;
    for (const auto& rel : sc.genesis_files) {
        std::string content = read_file((base / rel).string());
        // Fold file entries into the inline genesis list.
        std::istringstream is(content);
        std::string line;
        uint64_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
            std::istringstream ls(line);
            std::string name, amount;
            if (!(ls >> name)) continue;
            if (!(ls >> amount)) throw ScenarioError(lineno, "bad genesis file line");
            auto v = U256::parse(amount);
            if (!v) throw ScenarioError(lineno, "bad genesis amount");
            sc.genesis.emplace_back(name, *v);
        }
    }
    sc.genesis_files.clear();
    return Harness(std::move(sc), std::move(sources));
}

RunResult Harness::run() {
    if (sources_.empty()) throw ScenarioError(0, "scenario names no contracts");
    if (sc_.params.max_gas_per_call && *sc_.params.max_gas_per_call > sc_.block_gas_cap)
        throw ScenarioError(0, "max_call_gas exceeds the block gas cap: a capped call "
                               "could never be simulated within one block");

    std::vector<mcl::ValidatedContract> contracts;
    for (const auto& src : sources_) contracts.push_back(mcl::validate(mcl::parse(src)));
    auto program = std::make_shared<const wrap::LazyContract>(
        wrap::wrap_contract(std::move(contracts), sc_.params));

    chain::ChainState chain;
    chain.sched = sc_.sched;
    chain.block_gas_cap = sc_.block_gas_cap;
    for (const auto& [name, amount] : sc_.genesis)
        chain.genesis_mint(vm::Address{name}, amount);

    vm::Address lazy_addr{Harness::kLazyAddress};
    chain.deploy_lazy(lazy_addr, program);

    std::vector<PartyRuntime> parties;
    for (const auto& decl : sc_.cast) {
        PartyRuntime rt{decl.name,
                        vm::Address{decl.name},
                        party::Strategy(vm::Address{decl.name}, decl.config),
                        party::Replica::create(vm::Address{decl.name}, program, sc_.sched,
                                               chain.hash),
                        {}};
        rt.replica.flat_cap = sc_.block_gas_cap;
        parties.push_back(std::move(rt));
    }

    uint64_t horizon = sc_.horizon;
    if (horizon == 0) {
        uint64_t last = 0;
        for (const auto& d : sc_.timeline) last = std::max(last, d.block);
        horizon = last + 4 * sc_.params.window + 16;
    }

    GasReport report;
    report.seed = sc_.seed;
    std::vector<VerdictRecord> verdicts;
    size_t directive_cursor = 0;
    uint64_t applied_entries = 0;

    auto submit_directive = [&](const Directive& d) {
        const proto::LazyContractState* lazy = chain.find_lazy(lazy_addr);
        const PartyDecl* decl = sc_.find_party(d.party);
        chain::Transaction tx;
        tx.origin = vm::Address{d.party};
        tx.target = lazy_addr;
        tx.gas_limit = decl->config.tx_gas_limit;
        tx.gas_price = decl->config.tx_gas_price;

        auto need_args = [&](size_t n) {
            if (d.args.size() < n)
                throw ScenarioError(d.line, d.action + " needs " + std::to_string(n) +
                                                " arguments");
        };
        auto amount_arg = [&](size_t i) {
            auto v = U256::parse(d.args[i]);
            if (!v) throw ScenarioError(d.line, "bad amount '" + d.args[i] + "'");
            return *v;
        };
        auto index_arg = [&](size_t i) {
            auto v = U256::parse(d.args[i]);
            if (!v || !v->fits_u64())
                throw ScenarioError(d.line, "bad index '" + d.args[i] + "'");
            return v->low64();
        };

        if (d.action == "join") {
            tx.entry = "join";
            U256 need = sc_.params.deposit;
            auto it = lazy->parties.find(tx.origin);
            if (it != lazy->parties.end())
                need = sub_exact(sc_.params.deposit, it->second.deposit_remaining);
            tx.value = need;
        } else if (d.action == "deposit") {
            need_args(1);
            tx.entry = "depositEther";
            tx.value = amount_arg(0);
        } else if (d.action == "call") {
            need_args(2);
            const std::string& fname = d.args[0];
            auto qualified = program->resolve_function(fname);
            if (!qualified) throw ScenarioError(d.line, "unknown function '" + fname + "'");
            const mcl::FunctionDef* fn = program->find_rewritten(*qualified);
            uint64_t gm = index_arg(1);
            size_t argi = 2;
            U256 payment;
            if (d.args.size() > argi && d.args[argi] == "pay") {
                need_args(argi + 2);
                payment = amount_arg(argi + 1);
                argi += 2;
            }
            std::vector<vm::Value> args;
            for (size_t p = 1; p < fn->params.size(); ++p) {
                if (argi >= d.args.size())
                    throw ScenarioError(d.line, "missing argument for '" + fname + "'");
                const std::string& raw = d.args[argi++];
                switch (fn->params[p].type) {
                case mcl::McType::Uint: {
                    auto v = U256::parse(raw);
                    if (!v) throw ScenarioError(d.line, "bad uint '" + raw + "'");
                    args.emplace_back(*v);
                    break;
                }
                case mcl::McType::Address:
                    args.emplace_back(vm::Address{raw[0] == '@' ? raw.substr(1) : raw});
                    break;
                case mcl::McType::Bool:
                    args.emplace_back(raw == "true");
                    break;
                default:
                    throw ScenarioError(d.line, "map arguments are not expressible");
                }
            }
            if (argi != d.args.size()) throw ScenarioError(d.line, "too many arguments");
            tx.entry = "requestCall";
            tx.payload = chain::txdata::request_call(*qualified, gm, payment, args);
            // The recorded gas limit rides inside the entry; the transaction
            // itself only appends, so the default budget applies.
        } else if (d.action == "withdraw") {
            need_args(1);
            tx.entry = "requestWithdraw";
            tx.payload = chain::txdata::request_withdraw(amount_arg(0));
        } else if (d.action == "finalize") {
            need_args(1);
            tx.entry = "withdraw";
            tx.payload = chain::txdata::with_index(index_arg(0));
        } else if (d.action == "challenge") {
            need_args(1);
            tx.entry = "challenge";
            tx.payload = chain::txdata::with_index(index_arg(0));
        } else if (d.action == "bid") {
            need_args(2);
            tx.entry = "bid";
            tx.payload = chain::txdata::bid(index_arg(0), amount_arg(1));
        } else if (d.action == "simulate") {
            need_args(1);
            uint64_t k = index_arg(0);
            std::vector<uint8_t> preimage;
            // Scripted initiators seed a checkpoint resume automatically
            // from their replica's stash.
            if (lazy->dispute && !lazy->dispute->seeded &&
                k == lazy->dispute->replay_from + 1) {
                for (auto& rt : parties) {
                    if (rt.name != d.party) continue;
                    auto it = rt.replica.checkpoint_preimages.find(lazy->dispute->replay_from);
                    if (it != rt.replica.checkpoint_preimages.end()) preimage = it->second;
                }
            }
            uint64_t inner = 0;
            if (k >= 1 && k <= lazy->head_index() && lazy->entry_at(k).is_call())
                inner = lazy->entry_at(k).call().gas_limit;
            tx.gas_limit = std::max<uint64_t>(tx.gas_limit, inner + 600'000);
            tx.entry = "simulate";
            tx.payload = chain::txdata::simulate(k, preimage);
        } else if (d.action == "reportTimeout") {
            need_args(1);
            tx.entry = "reportTimeout";
            tx.payload = chain::txdata::with_index(index_arg(0));
        } else if (d.action == "leave") {
            tx.entry = "leave";
        } else if (d.action == "checkpoint") {
            tx.entry = "checkpoint";
            for (auto& rt : parties)
                if (rt.name == d.party) tx.payload = chain::txdata::checkpoint(rt.replica.digest());
        } else if (d.action == "claimGas") {
            tx.entry = "getGasPayment";
        } else {
            throw ScenarioError(d.line, "unknown action '" + d.action + "'");
        }
        chain.submit_tx(std::move(tx));
    };

    std::map<std::string, U256> fees_paid;
    std::set<std::string> blacklisted_before;

    for (uint64_t block = 1; block <= horizon; ++block) {
        while (directive_cursor < sc_.timeline.size() &&
               sc_.timeline[directive_cursor].block == block) {
            submit_directive(sc_.timeline[directive_cursor]);
            ++directive_cursor;
        }
        if (directive_cursor < sc_.timeline.size() &&
            sc_.timeline[directive_cursor].block < block)
            throw ScenarioError(sc_.timeline[directive_cursor].line,
                                "directive block already passed");

        // Strategies observe the chain as of the previous block.
        {
            const proto::LazyContractState* lazy = chain.find_lazy(lazy_addr);
            for (auto& rt : parties) {
                party::Observation obs;
                obs.block = block - 1;
                obs.lazy_address = lazy_addr;
                obs.lazy = lazy;
                obs.new_entries = std::move(rt.pending_events);
                rt.pending_events.clear();
                obs.replica = &rt.replica;
                for (auto& tx : rt.strategy.step(obs)) chain.submit_tx(std::move(tx));
            }
        }

        chain::BlockReceipt rec = chain.mine_block();

        const proto::LazyContractState* lazy = chain.find_lazy(lazy_addr);
        if (trace_ && !rec.txs.empty()) *trace_ << receipt_json(rec).dump() << "\n";
        for (const auto& r : rec.txs) {
            fees_paid[r.origin.label] = add_exact(fees_paid[r.origin.label], r.fee);
            if (r.status == chain::TxStatus::Success) {
                TxGasRecord row;
                row.entry = r.entry;
                row.gas_lazy = r.gas_used;
                report.per_tx.push_back(row);
            }
        }

        // Feed new ledger entries to every replica, fraud-checking first.
        while (applied_entries < lazy->head_index()) {
            const proto::LedgerEntry& e = lazy->entry_at(applied_entries + 1);
            if (trace_) *trace_ << entry_json(e).dump() << "\n";
            for (auto& rt : parties) {
                bool fraud = false;
                if (e.is_withdraw()) fraud = rt.replica.detect_fraud(e);
                else if (e.is_checkpoint()) fraud = rt.replica.detect_bad_checkpoint(e);
                rt.pending_events.push_back(party::LedgerEvent{e.index, fraud});
                rt.replica.apply_entry(e);
            }
            ++applied_entries;
        }

        // Slashing events: anyone newly blacklisted lost a dispute or slept
        // through a deadline.
        std::vector<std::string> newly_slashed;
        for (const auto& [p, acct] : lazy->parties) {
            if (acct.blacklisted && !blacklisted_before.count(p.label)) {
                newly_slashed.push_back(p.label);
                blacklisted_before.insert(p.label);
            }
        }
        if (!newly_slashed.empty()) {
            VerdictRecord v;
            v.block = rec.height;
            bool was_verdict = false;
            for (const auto& r : rec.txs) was_verdict |= r.verdict_reached;
            v.kind = was_verdict ? "verdict" : "timeout";
            v.slashed = newly_slashed;
            if (was_verdict) v.dishonest = newly_slashed.front();
            for (const auto& r : rec.txs)
                if (r.entry == "challenge" || r.verdict_reached) v.dispute_index = 0;
            verdicts.push_back(v);
            if (trace_) {
                ordered_json j;
                j["event"] = v.kind;
                j["height"] = v.block;
                j["slashed"] = v.slashed;
                *trace_ << j.dump() << "\n";
            }
        }
    }

    RunResult out;
    out.blocks = horizon;
    out.lazy_address = lazy_addr;
    out.program = program;
    const proto::LazyContractState* lazy = chain.find_lazy(lazy_addr);

    for (auto& rt : parties) {
        PartyNet net;
        for (const auto& [name, amount] : sc_.genesis)
            if (name == rt.name) net.genesis = add_exact(net.genesis, amount);
        net.acct_end = chain.account_balance(rt.address);
        net.fees_paid = fees_paid[rt.name];
        for (const auto& e : lazy->ledger)
            if (e.is_call() && e.call().party == rt.address)
                net.payments_made = add_exact(net.payments_made, e.call().payment);
        net.b_end = vm::balance_of(rt.replica.balances_view, rt.address);
        if (auto it = lazy->parties.find(rt.address); it != lazy->parties.end()) {
            net.deposit_end = it->second.deposit_remaining;
            net.slashed = it->second.blacklisted;
        }
        if (auto it = lazy->claims.find(rt.address); it != lazy->claims.end())
            net.claims_end = it->second;
        out.nets.emplace(rt.name, std::move(net));
        out.replicas.emplace(rt.name, std::move(rt.replica));
    }

    report.blocks = horizon;
    report.verdicts = std::move(verdicts);
    report.has_eager_leg = false;
    report.finalize();
    out.tx_count = report.tx_count;
    out.report = std::move(report);
    out.chain = std::move(chain);
    return out;
}

std::pair<vm::Storage, vm::Balances> force_full_replay(const chain::ChainState& chain,
                                                       const vm::Address& lazy_address) {
    const proto::LazyContractState* lazy = chain.find_lazy(lazy_address);
    if (!lazy) throw ScenarioError(0, "no wrapper deployed at " + lazy_address.label);

    vm::Storage storage = lazy->storage;
    vm::Balances b = lazy->b;
    auto rewritten = lazy->program->rewritten_table();
    proto::ReplayEnv env;
    env.program = lazy->program.get();
    env.rewritten = &rewritten;
    env.sched = &chain.sched;
    env.hash = &chain.hash;
    env.outer = nullptr;
    env.flat_mode = chain.sched.flat_tx_gas != 0;
    env.flat_cap = chain.block_gas_cap;
    for (uint64_t k = lazy->sim_cursor + 1; k <= lazy->head_index(); ++k)
        proto::apply_ledger_entry(env, storage, b, lazy->entry_at(k));
    return {std::move(storage), std::move(b)};
}

} // namespace lazyc::sim
