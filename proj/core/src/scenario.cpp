#include "lazyc/sim/scenario.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace lazyc::sim {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

uint64_t parse_u64(uint64_t line, const std::string& s) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ScenarioError(line, "bad integer '" + s + "'");
    return v;
}

U256 parse_amount(uint64_t line, const std::string& s) {
    auto v = U256::parse(s);
    if (!v) throw ScenarioError(line, "bad amount '" + s + "'");
    return *v;
}

party::StrategyConfig parse_strategy(uint64_t line, const std::string& spec,
                                     const Scenario& sc) {
    party::StrategyConfig cfg;
    cfg.tx_gas_limit = sc.default_gas_limit;
    cfg.tx_gas_price = sc.default_gas_price;

    std::string kind = spec;
    std::string opts;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        kind = spec.substr(0, colon);
        opts = spec.substr(colon + 1);
    }
    if (kind == "scripted") cfg.kind = party::StrategyKind::Scripted;
    else if (kind == "honest") cfg.kind = party::StrategyKind::Honest;
    else if (kind == "overwithdraw") cfg.kind = party::StrategyKind::OverWithdrawer;
    else if (kind == "falsechallenger") cfg.kind = party::StrategyKind::FalseChallenger;
    else if (kind == "sleepy") cfg.kind = party::StrategyKind::SleepyInitiator;
    else throw ScenarioError(line, "unknown strategy '" + kind + "'");

    std::istringstream is(opts);
    std::string kv;
    while (std::getline(is, kv, ',')) {
        if (kv.empty()) continue;
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ScenarioError(line, "expected k=v in '" + kv + "'");
        std::string k = kv.substr(0, eq);
        std::string v = kv.substr(eq + 1);
        if (k == "bid") cfg.bid_price = parse_amount(line, v);
        else if (k == "at") cfg.trigger_block = parse_u64(line, v);
        else if (k == "excess") cfg.excess = parse_amount(line, v);
        else if (k == "target") cfg.target = vm::Address{v};
        else if (k == "miss") cfg.miss_after = parse_u64(line, v);
        else if (k == "gas") cfg.tx_gas_limit = parse_u64(line, v);
        else if (k == "price") cfg.tx_gas_price = parse_amount(line, v);
        else throw ScenarioError(line, "unknown strategy option '" + k + "'");
    }
    return cfg;
}

const std::set<std::string> kActions = {
    "join",      "deposit",  "call",          "withdraw", "finalize", "challenge",
    "bid",       "simulate", "reportTimeout", "leave",    "checkpoint", "claimGas",
};

} // namespace

bool is_known_action(const std::string& action) { return kActions.count(action) > 0; }

const PartyDecl* Scenario::find_party(const std::string& name) const {
    for (const auto& p : cast)
        if (p.name == name) return &p;
    return nullptr;
}

Scenario parse_scenario(std::string_view text) {
    Scenario sc;
    uint64_t lineno = 0;
    size_t pos = 0;
    uint64_t last_block = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line(
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::vector<std::string> toks = split_ws(line);
        if (toks.empty()) continue;

        const std::string& head = toks[0];
        if (head == "param") {
            if (toks.size() != 3) throw ScenarioError(lineno, "param takes key and value");
            const std::string& key = toks[1];
            const std::string& val = toks[2];
            if (key == "deposit") sc.params.deposit = parse_amount(lineno, val);
            else if (key == "window") sc.params.window = parse_u64(lineno, val);
            else if (key == "max_call_gas") sc.params.max_gas_per_call = parse_u64(lineno, val);
            else if (key == "max_total_gas")
                sc.params.max_total_gas_per_user = parse_u64(lineno, val);
            else if (key == "max_calls") sc.params.max_call_count = parse_u64(lineno, val);
            else if (key == "checkpoint_every")
                sc.params.checkpoint_interval = parse_u64(lineno, val);
            else if (key == "flat_tx_gas") sc.sched.flat_tx_gas = parse_u64(lineno, val);
            else if (key == "block_gas_cap") sc.block_gas_cap = parse_u64(lineno, val);
            else if (key == "seed") sc.seed = parse_u64(lineno, val);
            else if (key == "horizon") sc.horizon = parse_u64(lineno, val);
            else if (key == "gas_price") sc.default_gas_price = parse_amount(lineno, val);
            else if (key == "gas_limit") sc.default_gas_limit = parse_u64(lineno, val);
            else throw ScenarioError(lineno, "unknown param '" + key + "'");
        } else if (head == "genesis") {
            if (toks.size() != 3) throw ScenarioError(lineno, "genesis takes name and amount");
            sc.genesis.emplace_back(toks[1], parse_amount(lineno, toks[2]));
        } else if (head == "genesis_file") {
            if (toks.size() != 2) throw ScenarioError(lineno, "genesis_file takes a path");
            sc.genesis_files.push_back(toks[1]);
        } else if (head == "contract") {
            if (toks.size() != 2) throw ScenarioError(lineno, "contract takes a path");
            sc.contract_paths.push_back(toks[1]);
        } else if (head == "party") {
            if (toks.size() != 3) throw ScenarioError(lineno, "party takes name and strategy");
            if (sc.find_party(toks[1])) throw ScenarioError(lineno, "duplicate party");
            sc.cast.push_back(PartyDecl{toks[1], parse_strategy(lineno, toks[2], sc)});
        } else if (head == "@block") {
            if (toks.size() < 4)
                throw ScenarioError(lineno, "@block takes N, party and an action");
            Directive d;
            d.block = parse_u64(lineno, toks[1]);
            d.party = toks[2];
            d.action = toks[3];
            d.args.assign(toks.begin() + 4, toks.end());
            d.line = lineno;
            if (d.block == 0) throw ScenarioError(lineno, "blocks start at 1");
            if (d.block < last_block)
                throw ScenarioError(lineno, "directive blocks must be non-decreasing");
            last_block = d.block;
            if (!is_known_action(d.action))
                throw ScenarioError(lineno, "unknown action '" + d.action + "'");
            if (!sc.find_party(d.party))
                throw ScenarioError(lineno, "unknown party '" + d.party + "'");
            sc.timeline.push_back(std::move(d));
        } else {
            throw ScenarioError(lineno, "unknown line '" + head + "'");
        }
    }
    if (sc.params.window == 0) throw ScenarioError(lineno, "window must be positive");
    if (sc.params.deposit.is_zero()) throw ScenarioError(lineno, "deposit must be positive");
    return sc;
}

} // namespace lazyc::sim
