#include "lazyc/wrap/lazy_contract.hpp"

#include <functional>
#include <set>

namespace lazyc::wrap {

using mcl::Expr;
using mcl::ExprKind;
using mcl::ExprPtr;
using mcl::FunctionDef;
using mcl::GlobalKind;
using mcl::GlobalsUsage;
using mcl::Stmt;
using mcl::StmtKind;

namespace {

ExprPtr make_lbal(ExprPtr key) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::LBal;
    e->a = std::move(key);
    e->type = mcl::McType::Uint;
    return e;
}

ExprPtr make_this() {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::ThisAddr;
    e->type = mcl::McType::Address;
    return e;
}

ExprPtr make_snap(GlobalKind g) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::SnapGlobal;
    e->global = g;
    e->type = g == GlobalKind::MsgSender ? mcl::McType::Address : mcl::McType::Uint;
    return e;
}

ExprPtr make_binary(mcl::BinOp op, ExprPtr a, ExprPtr b) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->op = op;
    e->a = std::move(a);
    e->b = std::move(b);
    e->type = mcl::McType::Uint;
    return e;
}

// b[key] = b[key] op rhs
Stmt make_b_update(ExprPtr key, mcl::BinOp op, ExprPtr rhs) {
    Stmt s;
    s.kind = StmtKind::Assign;
    s.e1 = make_lbal(key->clone());
    s.e2 = make_binary(op, make_lbal(std::move(key)), std::move(rhs));
    return s;
}

bool contains_extended_nodes(const Expr& e) {
    if (e.kind == ExprKind::LBal || e.kind == ExprKind::SnapGlobal) return true;
    if (e.a && contains_extended_nodes(*e.a)) return true;
    if (e.b && contains_extended_nodes(*e.b)) return true;
    return false;
}

bool contains_extended_nodes(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
        if (s.e1 && contains_extended_nodes(*s.e1)) return true;
        if (s.e2 && contains_extended_nodes(*s.e2)) return true;
        for (const auto& a : s.args)
            if (contains_extended_nodes(*a)) return true;
        if (contains_extended_nodes(s.body) || contains_extended_nodes(s.els)) return true;
    }
    return false;
}

ExprPtr rewrite_expr(const Expr& e) {
    switch (e.kind) {
    case ExprKind::GlobalRef:
        return make_snap(e.global);
    case ExprKind::BalanceOf:
        return make_lbal(rewrite_expr(*e.a));
    default: {
        ExprPtr out = e.clone();
        if (e.a) out->a = rewrite_expr(*e.a);
        if (e.b) out->b = rewrite_expr(*e.b);
        return out;
    }
    }
}

std::vector<Stmt> rewrite_body(const std::vector<Stmt>& body) {
    std::vector<Stmt> out;
    for (const auto& s : body) {
        switch (s.kind) {
        case StmtKind::Transfer: {
            // transfer(p, x)  =>  b[p] += x; b[this] -= x;
            // The amount is re-evaluated by the second statement, exactly as
            // in the wrapper's published form (b[C] -= b[C] zeroes out).
            ExprPtr to = rewrite_expr(*s.e1);
            ExprPtr amount = rewrite_expr(*s.e2);
            out.push_back(make_b_update(std::move(to), mcl::BinOp::Add, amount->clone()));
            out.push_back(make_b_update(make_this(), mcl::BinOp::Sub, std::move(amount)));
            break;
        }
        default: {
            Stmt ns;
            ns.kind = s.kind;
            ns.loc = s.loc;
            ns.decl_type = s.decl_type;
            ns.name = s.name;
            ns.slot = s.slot;
            ns.callee_contract = s.callee_contract;
            ns.callee_fn = s.callee_fn;
            if (s.e1) ns.e1 = rewrite_expr(*s.e1);
            if (s.e2) ns.e2 = rewrite_expr(*s.e2);
            for (const auto& a : s.args) ns.args.push_back(rewrite_expr(*a));
            ns.body = rewrite_body(s.body);
            ns.els = rewrite_body(s.els);
            out.push_back(std::move(ns));
            break;
        }
        }
    }
    return out;
}

void shift_slots_expr(Expr& e) {
    if (e.kind == ExprKind::VarRef &&
        (e.ref == mcl::RefKind::Param || e.ref == mcl::RefKind::Local))
        e.slot += 1;
    if (e.a) shift_slots_expr(*e.a);
    if (e.b) shift_slots_expr(*e.b);
}

void shift_slots(std::vector<Stmt>& body) {
    for (auto& s : body) {
        if (s.kind == StmtKind::LocalDecl) s.slot += 1;
        if (s.e1) shift_slots_expr(*s.e1);
        if (s.e2) shift_slots_expr(*s.e2);
        for (auto& a : s.args) shift_slots_expr(*a);
        shift_slots(s.body);
        shift_slots(s.els);
    }
}

} // namespace

FunctionDef rewrite_function(const FunctionDef& f, const GlobalsUsage& usage) {
    if (f.rewritten || contains_extended_nodes(f.body))
        throw WrapError(WrapErrorKind::AlreadyRewritten,
                        "function '" + f.name + "' is already in wrapper form");

    FunctionDef out;
    out.name = f.name;
    out.payable = f.payable;
    out.local_count = f.local_count;
    out.rewritten = true;
    // The ledger index of the originating call request becomes the first
    // parameter; existing frame slots shift by one.
    out.params.push_back(mcl::Param{"__k", mcl::McType::Uint});
    for (const auto& p : f.params) out.params.push_back(p);

    std::vector<Stmt> body = rewrite_body(f.body);
    shift_slots(body);

    if (f.payable) {
        // b[C] += value; b[sender] -= value;  (credited before any body code)
        std::vector<Stmt> prologue;
        prologue.push_back(
            make_b_update(make_this(), mcl::BinOp::Add, make_snap(GlobalKind::MsgValue)));
        prologue.push_back(make_b_update(make_snap(GlobalKind::MsgSender), mcl::BinOp::Sub,
                                         make_snap(GlobalKind::MsgValue)));
        for (auto& s : body) prologue.push_back(std::move(s));
        body = std::move(prologue);
    }
    out.body = std::move(body);
    out.usage = usage;
    return out;
}

namespace {

// Per-function syntactic usage closed over the internal call graph: a
// ledger snapshot must also cover globals read by callees, which execute
// against the caller's entry.
std::map<std::string, GlobalsUsage> close_usage(
    const std::vector<mcl::ValidatedContract>& contracts) {
    std::map<std::string, GlobalsUsage> usage;
    std::map<std::string, std::set<std::string>> callees;

    std::function<void(const std::vector<Stmt>&, std::set<std::string>&)> collect =
        [&](const std::vector<Stmt>& body, std::set<std::string>& out) {
            for (const auto& s : body) {
                if (s.kind == StmtKind::CallStmt)
                    out.insert(s.callee_contract + "." + s.callee_fn);
                collect(s.body, out);
                collect(s.els, out);
            }
        };

    for (const auto& vc : contracts) {
        for (const auto& f : vc.def.functions) {
            std::string key = vc.def.name + "." + f.name;
            usage[key] = mcl::analyze_globals(f);
            collect(f.body, callees[key]);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [fn, use] : usage) {
            for (const auto& callee : callees[fn]) {
                auto it = usage.find(callee);
                if (it == usage.end()) continue; // unresolved: reported elsewhere
                GlobalsUsage merged = use;
                merged.merge(it->second);
                if (!(merged == use)) {
                    use = merged;
                    changed = true;
                }
            }
        }
    }
    return usage;
}

void check_calls(const std::vector<mcl::ValidatedContract>& bundle,
                 const std::vector<Stmt>& body) {
    for (const auto& s : body) {
        if (s.kind == StmtKind::CallStmt) {
            std::string qualified = s.callee_contract + "." + s.callee_fn;
            const mcl::ValidatedContract* target = nullptr;
            for (const auto& c : bundle)
                if (c.def.name == s.callee_contract) target = &c;
            if (target == nullptr)
                throw WrapError(WrapErrorKind::ExternalCallError,
                                "call to '" + qualified +
                                    "' leaves the wrapped bundle; external contracts are "
                                    "unreachable from a wrapper");
            const mcl::FunctionDef* callee = target->def.find_function(s.callee_fn);
            if (callee == nullptr)
                throw WrapError(WrapErrorKind::UnknownFunction,
                                "unknown function '" + qualified + "'");
            if (callee->payable)
                throw WrapError(WrapErrorKind::BadCall,
                                "internal call to payable '" + qualified + "'");
            if (s.args.size() != callee->params.size())
                throw WrapError(WrapErrorKind::BadCall,
                                "arity mismatch calling '" + qualified + "'");
            for (size_t i = 0; i < s.args.size(); ++i)
                if (s.args[i]->type != callee->params[i].type)
                    throw WrapError(WrapErrorKind::BadCall,
                                    "argument type mismatch calling '" + qualified + "'");
        }
        check_calls(bundle, s.body);
        check_calls(bundle, s.els);
    }
}

} // namespace

LazyContract wrap_contract(std::vector<mcl::ValidatedContract> contracts,
                           const LazyParams& params) {
    if (contracts.empty())
        throw WrapError(WrapErrorKind::BadParams, "nothing to wrap");
    if (params.deposit.is_zero() || params.window == 0)
        throw WrapError(WrapErrorKind::BadParams, "deposit and window must be positive");

    LazyContract lc;
    lc.params = params;

    std::set<std::string> names;
    for (auto& c : contracts) {
        if (!names.insert(c.def.name).second)
            throw WrapError(WrapErrorKind::NameCollision,
                            "duplicate contract name '" + c.def.name + "'");
    }
    lc.originals = std::move(contracts);

    for (const auto& vc : lc.originals)
        for (const auto& f : vc.def.functions) check_calls(lc.originals, f.body);

    lc.usage = close_usage(lc.originals);

    for (const auto& vc : lc.originals) {
        for (const auto& f : vc.def.functions) {
            std::string key = vc.def.name + "." + f.name;
            lc.rewritten.emplace(key, rewrite_function(f, lc.usage.at(key)));
        }
    }
    return lc;
}

std::map<std::string, vm::BundleFn> LazyContract::rewritten_table() const {
    std::map<std::string, vm::BundleFn> table;
    for (const auto& [key, fn] : rewritten) {
        std::string contract = key.substr(0, key.find('.'));
        table[key] = vm::BundleFn{&fn, vm::Address{contract}};
    }
    return table;
}

std::map<std::string, vm::BundleFn> LazyContract::original_table() const {
    std::map<std::string, vm::BundleFn> table;
    for (const auto& vc : originals)
        for (const auto& f : vc.def.functions)
            table[vc.def.name + "." + f.name] = vm::BundleFn{&f, vm::Address{vc.def.name}};
    return table;
}

vm::Storage LazyContract::initial_storage() const {
    vm::Storage s;
    for (const auto& vc : originals) {
        vm::Storage part = vm::initial_storage(vc.def);
        s.insert(part.begin(), part.end());
    }
    return s;
}

const mcl::FunctionDef* LazyContract::find_rewritten(const std::string& qualified) const {
    auto it = rewritten.find(qualified);
    return it == rewritten.end() ? nullptr : &it->second;
}

const mcl::GlobalsUsage* LazyContract::find_usage(const std::string& qualified) const {
    auto it = usage.find(qualified);
    return it == usage.end() ? nullptr : &it->second;
}

std::optional<std::string> LazyContract::resolve_function(const std::string& name) const {
    if (name.find('.') != std::string::npos)
        return rewritten.count(name) ? std::optional(name) : std::nullopt;
    std::optional<std::string> found;
    for (const auto& [key, fn] : rewritten) {
        if (key.substr(key.find('.') + 1) == name) {
            if (found) return std::nullopt; // ambiguous
            found = key;
        }
    }
    return found;
}

} // namespace lazyc::wrap
