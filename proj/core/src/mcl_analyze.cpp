#include "lazyc/mcl/frontend.hpp"

namespace lazyc::mcl {

ExprPtr Expr::clone() const {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->loc = loc;
    e->int_val = int_val;
    e->bool_val = bool_val;
    e->name = name;
    e->global = global;
    e->op = op;
    if (a) e->a = a->clone();
    if (b) e->b = b->clone();
    e->ref = ref;
    e->slot = slot;
    e->state_key = state_key;
    e->type = type;
    return e;
}

Stmt Stmt::clone() const {
    Stmt s;
    s.kind = kind;
    s.loc = loc;
    s.decl_type = decl_type;
    s.name = name;
    s.slot = slot;
    s.callee_contract = callee_contract;
    s.callee_fn = callee_fn;
    if (e1) s.e1 = e1->clone();
    if (e2) s.e2 = e2->clone();
    for (const auto& a : args) s.args.push_back(a->clone());
    for (const auto& b : body) s.body.push_back(b.clone());
    for (const auto& e : els) s.els.push_back(e.clone());
    return s;
}

FunctionDef FunctionDef::clone() const {
    FunctionDef f;
    f.name = name;
    f.params = params;
    f.payable = payable;
    for (const auto& s : body) f.body.push_back(s.clone());
    f.local_count = local_count;
    f.usage = usage;
    f.rewritten = rewritten;
    return f;
}

StateVar StateVar::clone() const {
    StateVar sv;
    sv.name = name;
    sv.type = type;
    if (init) sv.init = init->clone();
    return sv;
}

ContractDef ContractDef::clone() const {
    ContractDef c;
    c.name = name;
    for (const auto& sv : state_vars) c.state_vars.push_back(sv.clone());
    for (const auto& f : functions) c.functions.push_back(f.clone());
    return c;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case ExprKind::IntLit: return a.int_val == b.int_val;
    case ExprKind::AddrLit: return a.name == b.name;
    case ExprKind::BoolLit: return a.bool_val == b.bool_val;
    case ExprKind::ThisAddr: return true;
    case ExprKind::VarRef: return a.name == b.name && a.ref == b.ref && a.slot == b.slot;
    case ExprKind::GlobalRef: return a.global == b.global;
    case ExprKind::Binary:
        return a.op == b.op && structurally_equal(*a.a, *b.a) && structurally_equal(*a.b, *b.b);
    case ExprKind::Not:
    case ExprKind::Hash:
    case ExprKind::BalanceOf:
    case ExprKind::LBal:
        return structurally_equal(*a.a, *b.a);
    case ExprKind::MapIndex:
        return a.name == b.name && structurally_equal(*a.a, *b.a);
    case ExprKind::SnapGlobal: return a.global == b.global;
    }
    return false;
}

namespace {

bool stmts_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!structurally_equal(a[i], b[i])) return false;
    return true;
}

} // namespace

bool structurally_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind) return false;
    auto opt_eq = [](const ExprPtr& x, const ExprPtr& y) {
        if (!x != !y) return false;
        return !x || structurally_equal(*x, *y);
    };
    switch (a.kind) {
    case StmtKind::LocalDecl:
        return a.decl_type == b.decl_type && a.name == b.name && opt_eq(a.e1, b.e1);
    case StmtKind::Assign:
        return structurally_equal(*a.e1, *b.e1) && structurally_equal(*a.e2, *b.e2);
    case StmtKind::If:
        return structurally_equal(*a.e1, *b.e1) && stmts_equal(a.body, b.body) &&
               stmts_equal(a.els, b.els);
    case StmtKind::While:
        return structurally_equal(*a.e1, *b.e1) && stmts_equal(a.body, b.body);
    case StmtKind::Require:
    case StmtKind::ExprStmt:
        return structurally_equal(*a.e1, *b.e1);
    case StmtKind::Transfer:
        return structurally_equal(*a.e1, *b.e1) && structurally_equal(*a.e2, *b.e2);
    case StmtKind::CallStmt: {
        if (a.callee_contract != b.callee_contract || a.callee_fn != b.callee_fn) return false;
        if (a.args.size() != b.args.size()) return false;
        for (size_t i = 0; i < a.args.size(); ++i)
            if (!structurally_equal(*a.args[i], *b.args[i])) return false;
        return true;
    }
    }
    return false;
}

bool structurally_equal(const FunctionDef& a, const FunctionDef& b) {
    return a.name == b.name && a.params == b.params && a.payable == b.payable &&
           stmts_equal(a.body, b.body);
}

bool structurally_equal(const ContractDef& a, const ContractDef& b) {
    if (a.name != b.name) return false;
    if (a.state_vars.size() != b.state_vars.size()) return false;
    for (size_t i = 0; i < a.state_vars.size(); ++i) {
        const auto& x = a.state_vars[i];
        const auto& y = b.state_vars[i];
        if (x.name != y.name || x.type != y.type) return false;
        if (!x.init != !y.init) return false;
        if (x.init && !structurally_equal(*x.init, *y.init)) return false;
    }
    if (a.functions.size() != b.functions.size()) return false;
    for (size_t i = 0; i < a.functions.size(); ++i)
        if (!structurally_equal(a.functions[i], b.functions[i])) return false;
    return true;
}

namespace {

void collect_globals(const Expr& e, GlobalsUsage& out) {
    if (e.kind == ExprKind::GlobalRef) out.add(e.global);
    if (e.a) collect_globals(*e.a, out);
    if (e.b) collect_globals(*e.b, out);
}

void collect_globals(const std::vector<Stmt>& body, GlobalsUsage& out) {
    for (const auto& s : body) {
        if (s.e1) collect_globals(*s.e1, out);
        if (s.e2) collect_globals(*s.e2, out);
        for (const auto& a : s.args) collect_globals(*a, out);
        collect_globals(s.body, out);
        collect_globals(s.els, out);
    }
}

} // namespace

GlobalsUsage analyze_globals(const FunctionDef& f) {
    GlobalsUsage out;
    collect_globals(f.body, out);
    if (f.payable) out.add(GlobalKind::MsgValue);
    return out;
}

} // namespace lazyc::mcl
