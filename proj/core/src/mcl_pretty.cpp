#include "lazyc/mcl/frontend.hpp"

#include <sstream>

namespace lazyc::mcl {

namespace {

int precedence(const Expr& e) {
    if (e.kind != ExprKind::Binary) return 7;
    switch (e.op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq: case BinOp::Ne: return 3;
    case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
    case BinOp::Add: case BinOp::Sub: return 5;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
    }
    return 7;
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
    int prec = precedence(e);
    switch (e.kind) {
    case ExprKind::IntLit: os << e.int_val.to_dec(); break;
    case ExprKind::AddrLit: os << "@" << e.name; break;
    case ExprKind::BoolLit: os << (e.bool_val ? "true" : "false"); break;
    case ExprKind::ThisAddr: os << "this"; break;
    case ExprKind::VarRef: os << e.name; break;
    case ExprKind::GlobalRef: os << global_name(e.global); break;
    case ExprKind::Binary: {
        bool paren = prec < parent_prec;
        if (paren) os << "(";
        print_expr(os, *e.a, prec);
        os << " " << binop_token(e.op) << " ";
        // Right operand gets prec+1: operators associate left.
        print_expr(os, *e.b, prec + 1);
        if (paren) os << ")";
        break;
    }
    case ExprKind::Not:
        os << "!";
        print_expr(os, *e.a, 7);
        break;
    case ExprKind::Hash:
        os << "hash(";
        print_expr(os, *e.a, 0);
        os << ")";
        break;
    case ExprKind::BalanceOf:
        os << "balance(";
        print_expr(os, *e.a, 0);
        os << ")";
        break;
    case ExprKind::MapIndex:
        os << e.name << "[";
        print_expr(os, *e.a, 0);
        os << "]";
        break;
    case ExprKind::LBal:
        os << "__b[";
        print_expr(os, *e.a, 0);
        os << "]";
        break;
    case ExprKind::SnapGlobal:
        switch (e.global) {
        case GlobalKind::BlockNumber: os << "__snap_block_number"; break;
        case GlobalKind::MsgSender: os << "__snap_msg_sender"; break;
        case GlobalKind::MsgValue: os << "__snap_msg_value"; break;
        }
        break;
    }
}

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(size_t(indent) * 4, ' ');
    os << pad;
    switch (s.kind) {
    case StmtKind::LocalDecl:
        os << type_name(s.decl_type) << " " << s.name;
        if (s.e1) {
            os << " = ";
            print_expr(os, *s.e1, 0);
        }
        os << ";\n";
        break;
    case StmtKind::Assign:
        print_expr(os, *s.e1, 0);
        os << " = ";
        print_expr(os, *s.e2, 0);
        os << ";\n";
        break;
    case StmtKind::If:
        os << "if (";
        print_expr(os, *s.e1, 0);
        os << ") {\n";
        print_stmts(os, s.body, indent + 1);
        os << pad << "}";
        if (!s.els.empty()) {
            os << " else {\n";
            print_stmts(os, s.els, indent + 1);
            os << pad << "}";
        }
        os << "\n";
        break;
    case StmtKind::While:
        os << "while (";
        print_expr(os, *s.e1, 0);
        os << ") {\n";
        print_stmts(os, s.body, indent + 1);
        os << pad << "}\n";
        break;
    case StmtKind::Require:
        os << "require(";
        print_expr(os, *s.e1, 0);
        os << ");\n";
        break;
    case StmtKind::Transfer:
        os << "transfer(";
        print_expr(os, *s.e1, 0);
        os << ", ";
        print_expr(os, *s.e2, 0);
        os << ");\n";
        break;
    case StmtKind::ExprStmt:
        print_expr(os, *s.e1, 0);
        os << ";\n";
        break;
    case StmtKind::CallStmt:
        os << s.callee_contract << "." << s.callee_fn << "(";
        for (size_t i = 0; i < s.args.size(); ++i) {
            if (i) os << ", ";
            print_expr(os, *s.args[i], 0);
        }
        os << ");\n";
        break;
    }
}

void print_stmts(std::ostream& os, const std::vector<Stmt>& body, int indent) {
    for (const auto& s : body) print_stmt(os, s, indent);
}

} // namespace

std::string pretty_print(const Expr& e) {
    std::ostringstream os;
    print_expr(os, e, 0);
    return os.str();
}

std::string pretty_print(const Stmt& s, int indent) {
    std::ostringstream os;
    print_stmt(os, s, indent);
    return os.str();
}

std::string pretty_print(const ContractDef& c) {
    std::ostringstream os;
    os << "contract " << c.name << " {\n";
    for (const auto& sv : c.state_vars) {
        os << "    " << type_name(sv.type) << " " << sv.name;
        if (sv.init) {
            os << " = ";
            print_expr(os, *sv.init, 0);
        }
        os << ";\n";
    }
    for (const auto& f : c.functions) {
        os << "\n    function " << f.name << "(";
        for (size_t i = 0; i < f.params.size(); ++i) {
            if (i) os << ", ";
            os << type_name(f.params[i].type) << " " << f.params[i].name;
        }
        os << ")";
        if (f.payable) os << " payable";
        os << " {\n";
        print_stmts(os, f.body, 2);
        os << "    }\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace lazyc::mcl
