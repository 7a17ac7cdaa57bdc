#include "lazyc/mcl/frontend.hpp"

#include <vector>

namespace lazyc::mcl {

namespace {

class Checker {
public:
    Checker(const ContractDef& c, const FunctionDef& f) : contract_(c), fn_(f) {
        frame_types_.reserve(f.params.size() + f.local_count);
        for (const auto& p : f.params) frame_types_.push_back(p.type);
        frame_types_.resize(f.params.size() + f.local_count, McType::Uint);
    }

    void check_body(std::vector<Stmt>& body) {
        for (auto& s : body) check_stmt(s);
    }

private:
    const ContractDef& contract_;
    const FunctionDef& fn_;
    std::vector<McType> frame_types_;

    [[noreturn]] void type_error(SrcLoc loc, const std::string& msg) {
        throw Diagnostic(DiagKind::TypeError, loc, msg);
    }

    void require_type(Expr& e, McType want, const char* what) {
        McType got = check_expr(e);
        if (got != want)
            type_error(e.loc, std::string(what) + ": expected " + type_name(want) +
                                  ", got " + type_name(got));
    }

    McType check_expr(Expr& e) {
        McType t = infer(e);
        e.type = t;
        return t;
    }

    McType infer(Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: return McType::Uint;
        case ExprKind::AddrLit: return McType::Address;
        case ExprKind::BoolLit: return McType::Bool;
        case ExprKind::ThisAddr: return McType::Address;
        case ExprKind::VarRef:
            if (e.ref == RefKind::State) {
                const StateVar* sv = contract_.find_state_var(e.name);
                return sv->type;
            }
            return frame_types_[e.slot];
        case ExprKind::GlobalRef:
            if (e.global == GlobalKind::MsgValue && !fn_.payable)
                throw Diagnostic(DiagKind::PayabilityError, e.loc,
                                 "msg.value read in non-payable function '" + fn_.name + "'");
            return e.global == GlobalKind::MsgSender ? McType::Address : McType::Uint;
        case ExprKind::Binary: {
            switch (e.op) {
            case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
            case BinOp::Div: case BinOp::Mod:
                require_type(*e.a, McType::Uint, "arithmetic operand");
                require_type(*e.b, McType::Uint, "arithmetic operand");
                return McType::Uint;
            case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
                require_type(*e.a, McType::Uint, "comparison operand");
                require_type(*e.b, McType::Uint, "comparison operand");
                return McType::Bool;
            case BinOp::Eq: case BinOp::Ne: {
                McType ta = check_expr(*e.a);
                McType tb = check_expr(*e.b);
                if (ta != tb || ta == McType::Map)
                    type_error(e.loc, std::string("cannot compare ") + type_name(ta) +
                                          " with " + type_name(tb));
                return McType::Bool;
            }
            case BinOp::And: case BinOp::Or:
                require_type(*e.a, McType::Bool, "logical operand");
                require_type(*e.b, McType::Bool, "logical operand");
                return McType::Bool;
            }
            type_error(e.loc, "bad operator");
        }
        case ExprKind::Not:
            require_type(*e.a, McType::Bool, "'!' operand");
            return McType::Bool;
        case ExprKind::Hash: {
            McType t = check_expr(*e.a);
            if (t == McType::Map) type_error(e.loc, "cannot hash a map");
            return McType::Uint;
        }
        case ExprKind::BalanceOf:
            require_type(*e.a, McType::Address, "balance() argument");
            return McType::Uint;
        case ExprKind::MapIndex:
            require_type(*e.a, McType::Address, "map index");
            return McType::Uint;
        case ExprKind::LBal:
        case ExprKind::SnapGlobal:
            type_error(e.loc, "internal node in source AST");
        }
        type_error(e.loc, "unknown expression");
    }

    void check_stmt(Stmt& s) {
        switch (s.kind) {
        case StmtKind::LocalDecl:
            frame_types_[s.slot] = s.decl_type;
            if (s.e1) {
                McType got = check_expr(*s.e1);
                if (got != s.decl_type)
                    type_error(s.loc, "cannot initialize " +
                                          std::string(type_name(s.decl_type)) + " '" +
                                          s.name + "' with " + type_name(got));
            }
            return;
        case StmtKind::Assign: {
            McType lhs = check_expr(*s.e1);
            McType rhs = check_expr(*s.e2);
            if (lhs != rhs)
                type_error(s.loc, std::string("cannot assign ") + type_name(rhs) +
                                      " to " + type_name(lhs));
            if (lhs == McType::Map) type_error(s.loc, "cannot assign whole maps");
            return;
        }
        case StmtKind::If:
            require_type(*s.e1, McType::Bool, "if condition");
            check_body(s.body);
            check_body(s.els);
            return;
        case StmtKind::While:
            require_type(*s.e1, McType::Bool, "while condition");
            check_body(s.body);
            return;
        case StmtKind::Require:
            require_type(*s.e1, McType::Bool, "require condition");
            return;
        case StmtKind::Transfer:
            require_type(*s.e1, McType::Address, "transfer recipient");
            require_type(*s.e2, McType::Uint, "transfer amount");
            return;
        case StmtKind::ExprStmt:
            check_expr(*s.e1);
            return;
        case StmtKind::CallStmt: {
            for (auto& a : s.args) check_expr(*a);
            // Same-contract callees are checked here; cross-contract calls
            // are resolved when the bundle is wrapped.
            if (s.callee_contract == contract_.name) {
                const FunctionDef* callee = contract_.find_function(s.callee_fn);
                if (callee == nullptr)
                    throw Diagnostic(DiagKind::NameError, s.loc,
                                     "unknown function '" + s.callee_fn + "'");
                check_call_signature(s, *callee);
            }
            return;
        }
        }
    }

public:
    void check_call_signature(const Stmt& s, const FunctionDef& callee) {
        if (callee.payable)
            type_error(s.loc, "cannot call payable function '" + callee.name + "' internally");
        if (s.args.size() != callee.params.size())
            type_error(s.loc, "call to '" + callee.name + "' expects " +
                                  std::to_string(callee.params.size()) + " arguments");
        for (size_t i = 0; i < s.args.size(); ++i) {
            if (s.args[i]->type != callee.params[i].type)
                type_error(s.args[i]->loc,
                           std::string("argument ") + std::to_string(i + 1) + " of '" +
                               callee.name + "' expects " + type_name(callee.params[i].type));
        }
    }
};

} // namespace

ValidatedContract validate(ContractDef contract) {
    for (auto& sv : contract.state_vars) {
        if (sv.init) {
            McType lit = sv.init->kind == ExprKind::IntLit    ? McType::Uint
                         : sv.init->kind == ExprKind::AddrLit ? McType::Address
                                                              : McType::Bool;
            if (lit != sv.type)
                throw Diagnostic(DiagKind::TypeError, sv.init->loc,
                                 "initializer type mismatch for '" + sv.name + "'");
            sv.init->type = lit;
        }
    }
    for (auto& f : contract.functions) {
        Checker ck(contract, f);
        ck.check_body(f.body);
        f.usage = analyze_globals(f);
    }
    return ValidatedContract{std::move(contract)};
}

} // namespace lazyc::mcl
