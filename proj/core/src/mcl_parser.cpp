#include "lazyc/mcl/frontend.hpp"
#include "mcl_lexer.hpp"

#include <map>
#include <set>

namespace lazyc::mcl {

const char* type_name(McType t) {
    switch (t) {
    case McType::Uint: return "uint";
    case McType::Address: return "address";
    case McType::Bool: return "bool";
    case McType::Map: return "map(address => uint)";
    }
    return "?";
}

const char* global_name(GlobalKind g) {
    switch (g) {
    case GlobalKind::BlockNumber: return "block.number";
    case GlobalKind::MsgSender: return "msg.sender";
    case GlobalKind::MsgValue: return "msg.value";
    }
    return "?";
}

const char* binop_token(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    }
    return "?";
}

namespace {

struct Scope {
    // name -> frame slot for params+locals; state vars looked up in contract.
    // Slots below nparams are parameters.
    std::map<std::string, uint32_t> frame;
    const ContractDef* contract = nullptr;
    uint32_t next_slot = 0;
    uint32_t nparams = 0;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ContractDef parse_contract() {
        expect(Tok::KwContract);
        ContractDef c;
        c.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) {
            if (at(Tok::KwFunction)) {
                parse_function(c);
            } else {
                parse_state_var(c);
            }
        }
        expect(Tok::RBrace);
        expect(Tok::End);
        return c;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(size_t n = 1) const {
        return toks_[std::min(pos_ + n, toks_.size() - 1)];
    }
    bool at(Tok t) const { return cur().kind == t; }
    Token take() { return toks_[pos_++]; }
    Token expect(Tok t) {
        if (!at(t)) {
            throw Diagnostic(DiagKind::SyntaxError, cur().loc,
                             std::string("expected ") + tok_name(t) + ", found " +
                                 tok_name(cur().kind));
        }
        return take();
    }
    bool accept(Tok t) {
        if (at(t)) { ++pos_; return true; }
        return false;
    }

    McType parse_type() {
        SrcLoc l = cur().loc;
        if (accept(Tok::KwUint)) return McType::Uint;
        if (accept(Tok::KwAddress)) return McType::Address;
        if (accept(Tok::KwBool)) return McType::Bool;
        if (accept(Tok::KwMap)) {
            expect(Tok::LParen);
            expect(Tok::KwAddress);
            expect(Tok::Arrow);
            expect(Tok::KwUint);
            expect(Tok::RParen);
            return McType::Map;
        }
        throw Diagnostic(DiagKind::SyntaxError, l, "expected a type");
    }

    bool at_type() const {
        return at(Tok::KwUint) || at(Tok::KwAddress) || at(Tok::KwBool) || at(Tok::KwMap);
    }

    void parse_state_var(ContractDef& c) {
        SrcLoc l = cur().loc;
        McType t = parse_type();
        Token name = expect(Tok::Ident);
        if (c.find_state_var(name.text) != nullptr) {
            throw Diagnostic(DiagKind::NameError, name.loc,
                             "duplicate state variable '" + name.text + "'");
        }
        StateVar sv;
        sv.name = name.text;
        sv.type = t;
        if (accept(Tok::Assign)) {
            if (t == McType::Map)
                throw Diagnostic(DiagKind::SyntaxError, l, "maps cannot be initialized");
            sv.init = parse_literal();
        }
        expect(Tok::Semi);
        c.state_vars.push_back(std::move(sv));
    }

    ExprPtr parse_literal() {
        auto e = std::make_unique<Expr>();
        e->loc = cur().loc;
        if (at(Tok::Int)) {
            e->kind = ExprKind::IntLit;
            auto v = U256::parse(take().text);
            if (!v) throw Diagnostic(DiagKind::SyntaxError, e->loc, "integer literal out of range");
            e->int_val = *v;
        } else if (at(Tok::AddrLit)) {
            e->kind = ExprKind::AddrLit;
            e->name = take().text;
        } else if (accept(Tok::KwTrue)) {
            e->kind = ExprKind::BoolLit;
            e->bool_val = true;
        } else if (accept(Tok::KwFalse)) {
            e->kind = ExprKind::BoolLit;
            e->bool_val = false;
        } else {
            throw Diagnostic(DiagKind::SyntaxError, e->loc,
                             "state variable initializers must be literals");
        }
        return e;
    }

    void parse_function(ContractDef& c) {
        expect(Tok::KwFunction);
        Token name = expect(Tok::Ident);
        if (c.find_function(name.text) != nullptr) {
            throw Diagnostic(DiagKind::NameError, name.loc,
                             "duplicate function '" + name.text + "'");
        }
        FunctionDef f;
        f.name = name.text;
        expect(Tok::LParen);
        Scope scope;
        scope.contract = &c;
        if (!at(Tok::RParen)) {
            do {
                McType t = parse_type();
                if (t == McType::Map)
                    throw Diagnostic(DiagKind::SyntaxError, cur().loc,
                                     "maps cannot be parameters");
                Token pn = expect(Tok::Ident);
                if (scope.frame.count(pn.text))
                    throw Diagnostic(DiagKind::NameError, pn.loc,
                                     "duplicate parameter '" + pn.text + "'");
                scope.frame[pn.text] = scope.next_slot++;
                f.params.push_back(Param{pn.text, t});
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen);
        scope.nparams = scope.next_slot;
        f.payable = accept(Tok::KwPayable);
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) f.body.push_back(parse_stmt(scope));
        expect(Tok::RBrace);
        f.local_count = scope.next_slot - (uint32_t)f.params.size();
        c.functions.push_back(std::move(f));
    }

    std::vector<Stmt> parse_stmt_or_block(Scope& scope) {
        std::vector<Stmt> out;
        if (accept(Tok::LBrace)) {
            while (!at(Tok::RBrace)) out.push_back(parse_stmt(scope));
            expect(Tok::RBrace);
        } else {
            out.push_back(parse_stmt(scope));
        }
        return out;
    }

    Stmt parse_stmt(Scope& scope) {
        Stmt s;
        s.loc = cur().loc;
        if (at_type()) {
            McType t = parse_type();
            if (t == McType::Map)
                throw Diagnostic(DiagKind::SyntaxError, s.loc,
                                 "maps must be state variables");
            Token name = expect(Tok::Ident);
            if (scope.frame.count(name.text))
                throw Diagnostic(DiagKind::NameError, name.loc,
                                 "redeclaration of '" + name.text + "'");
            s.kind = StmtKind::LocalDecl;
            s.decl_type = t;
            s.name = name.text;
            if (accept(Tok::Assign)) s.e1 = parse_expr(scope);
            expect(Tok::Semi);
            // Declared after the initializer so `uint x = x;` is a NameError.
            s.slot = scope.next_slot++;
            scope.frame[name.text] = s.slot;
            return s;
        }
        if (at(Tok::KwIf)) {
            take();
            s.kind = StmtKind::If;
            expect(Tok::LParen);
            s.e1 = parse_expr(scope);
            expect(Tok::RParen);
            s.body = parse_stmt_or_block(scope);
            if (accept(Tok::KwElse)) s.els = parse_stmt_or_block(scope);
            return s;
        }
        if (at(Tok::KwWhile)) {
            take();
            s.kind = StmtKind::While;
            expect(Tok::LParen);
            s.e1 = parse_expr(scope);
            expect(Tok::RParen);
            s.body = parse_stmt_or_block(scope);
            return s;
        }
        if (at(Tok::KwRequire)) {
            take();
            s.kind = StmtKind::Require;
            expect(Tok::LParen);
            s.e1 = parse_expr(scope);
            expect(Tok::RParen);
            expect(Tok::Semi);
            return s;
        }
        if (at(Tok::KwTransfer)) {
            take();
            s.kind = StmtKind::Transfer;
            expect(Tok::LParen);
            s.e1 = parse_expr(scope);
            expect(Tok::Comma);
            s.e2 = parse_expr(scope);
            expect(Tok::RParen);
            expect(Tok::Semi);
            return s;
        }
        // Qualified call statement: Contract.fn(args);
        if (at(Tok::Ident) && peek().kind == Tok::Dot && peek(2).kind == Tok::Ident &&
            peek(3).kind == Tok::LParen && !is_global_pair(cur().text, peek(2).text)) {
            s.kind = StmtKind::CallStmt;
            s.callee_contract = take().text;
            take(); // dot
            s.callee_fn = take().text;
            expect(Tok::LParen);
            if (!at(Tok::RParen)) {
                do s.args.push_back(parse_expr(scope));
                while (accept(Tok::Comma));
            }
            expect(Tok::RParen);
            expect(Tok::Semi);
            return s;
        }
        // Assignment: ident = e; or ident[key] = e;
        if (at(Tok::Ident) &&
            (peek().kind == Tok::Assign ||
             (peek().kind == Tok::LBracket && assignment_after_bracket()))) {
            s.kind = StmtKind::Assign;
            s.e1 = parse_lvalue(scope);
            expect(Tok::Assign);
            s.e2 = parse_expr(scope);
            expect(Tok::Semi);
            return s;
        }
        s.kind = StmtKind::ExprStmt;
        s.e1 = parse_expr(scope);
        expect(Tok::Semi);
        return s;
    }

    // Scans past a balanced [ ... ] to see whether '=' follows (map write).
    bool assignment_after_bracket() const {
        size_t p = pos_ + 1; // at '['
        int depth = 0;
        while (p < toks_.size()) {
            Tok t = toks_[p].kind;
            if (t == Tok::LBracket) ++depth;
            else if (t == Tok::RBracket) {
                if (--depth == 0) return p + 1 < toks_.size() && toks_[p + 1].kind == Tok::Assign;
            } else if (t == Tok::Semi || t == Tok::End) {
                return false;
            }
            ++p;
        }
        return false;
    }

    static bool is_global_pair(const std::string& a, const std::string& b) {
        return (a == "block" && b == "number") ||
               (a == "msg" && (b == "sender" || b == "value"));
    }

    ExprPtr parse_lvalue(Scope& scope) {
        Token name = expect(Tok::Ident);
        auto e = std::make_unique<Expr>();
        e->loc = name.loc;
        e->name = name.text;
        if (accept(Tok::LBracket)) {
            e->kind = ExprKind::MapIndex;
            e->a = parse_expr(scope);
            expect(Tok::RBracket);
            resolve_map(*e, scope);
        } else {
            e->kind = ExprKind::VarRef;
            resolve_var(*e, scope);
        }
        return e;
    }

    void resolve_var(Expr& e, Scope& scope) {
        auto it = scope.frame.find(e.name);
        if (it != scope.frame.end()) {
            e.ref = it->second < scope.nparams ? RefKind::Param : RefKind::Local;
            e.slot = it->second;
            return;
        }
        if (const StateVar* sv = scope.contract->find_state_var(e.name)) {
            if (sv->type == McType::Map)
                throw Diagnostic(DiagKind::TypeError, e.loc,
                                 "map '" + e.name + "' requires an index");
            e.ref = RefKind::State;
            e.state_key = scope.contract->name + "." + e.name;
            return;
        }
        throw Diagnostic(DiagKind::NameError, e.loc, "unresolved identifier '" + e.name + "'");
    }

    void resolve_map(Expr& e, Scope& scope) {
        const StateVar* sv = scope.contract->find_state_var(e.name);
        if (sv == nullptr) {
            if (scope.frame.count(e.name))
                throw Diagnostic(DiagKind::TypeError, e.loc,
                                 "'" + e.name + "' is not a map");
            throw Diagnostic(DiagKind::NameError, e.loc,
                             "unresolved identifier '" + e.name + "'");
        }
        if (sv->type != McType::Map)
            throw Diagnostic(DiagKind::TypeError, e.loc, "'" + e.name + "' is not a map");
        e.ref = RefKind::State;
        e.state_key = scope.contract->name + "." + e.name;
    }

    ExprPtr parse_expr(Scope& scope) { return parse_or(scope); }

    ExprPtr parse_or(Scope& scope) {
        auto lhs = parse_and(scope);
        while (at(Tok::OrOr)) {
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = BinOp::Or;
            e->a = std::move(lhs);
            e->b = parse_and(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_and(Scope& scope) {
        auto lhs = parse_eq(scope);
        while (at(Tok::AndAnd)) {
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = BinOp::And;
            e->a = std::move(lhs);
            e->b = parse_eq(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_eq(Scope& scope) {
        auto lhs = parse_rel(scope);
        while (at(Tok::Eq) || at(Tok::Ne)) {
            BinOp op = at(Tok::Eq) ? BinOp::Eq : BinOp::Ne;
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = op;
            e->a = std::move(lhs);
            e->b = parse_rel(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_rel(Scope& scope) {
        auto lhs = parse_add(scope);
        while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
            BinOp op = at(Tok::Lt)   ? BinOp::Lt
                       : at(Tok::Le) ? BinOp::Le
                       : at(Tok::Gt) ? BinOp::Gt
                                     : BinOp::Ge;
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = op;
            e->a = std::move(lhs);
            e->b = parse_add(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_add(Scope& scope) {
        auto lhs = parse_mul(scope);
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = op;
            e->a = std::move(lhs);
            e->b = parse_mul(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_mul(Scope& scope) {
        auto lhs = parse_unary(scope);
        while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
            BinOp op = at(Tok::Star)    ? BinOp::Mul
                       : at(Tok::Slash) ? BinOp::Div
                                        : BinOp::Mod;
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Binary;
            e->loc = l;
            e->op = op;
            e->a = std::move(lhs);
            e->b = parse_unary(scope);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr parse_unary(Scope& scope) {
        if (at(Tok::Bang)) {
            SrcLoc l = take().loc;
            auto e = std::make_unique<Expr>();
            e->kind = ExprKind::Not;
            e->loc = l;
            e->a = parse_unary(scope);
            return e;
        }
        return parse_primary(scope);
    }

    ExprPtr parse_primary(Scope& scope) {
        auto e = std::make_unique<Expr>();
        e->loc = cur().loc;
        if (at(Tok::Int)) {
            e->kind = ExprKind::IntLit;
            auto v = U256::parse(take().text);
            if (!v) throw Diagnostic(DiagKind::SyntaxError, e->loc, "integer literal out of range");
            e->int_val = *v;
            return e;
        }
        if (at(Tok::AddrLit)) {
            e->kind = ExprKind::AddrLit;
            e->name = take().text;
            return e;
        }
        if (accept(Tok::KwTrue)) { e->kind = ExprKind::BoolLit; e->bool_val = true; return e; }
        if (accept(Tok::KwFalse)) { e->kind = ExprKind::BoolLit; e->bool_val = false; return e; }
        if (accept(Tok::KwThis)) {
            if (accept(Tok::Dot)) {
                if (!accept(Tok::KwBalance))
                    throw Diagnostic(DiagKind::SyntaxError, cur().loc,
                                     "unknown member of 'this'");
                auto self = std::make_unique<Expr>();
                self->kind = ExprKind::ThisAddr;
                self->loc = e->loc;
                e->kind = ExprKind::BalanceOf;
                e->a = std::move(self);
                return e;
            }
            e->kind = ExprKind::ThisAddr;
            return e;
        }
        if (accept(Tok::KwHash)) {
            expect(Tok::LParen);
            e->kind = ExprKind::Hash;
            e->a = parse_expr(scope);
            expect(Tok::RParen);
            return e;
        }
        if (accept(Tok::KwBalance)) {
            expect(Tok::LParen);
            e->kind = ExprKind::BalanceOf;
            e->a = parse_expr(scope);
            expect(Tok::RParen);
            return e;
        }
        if (accept(Tok::LParen)) {
            auto inner = parse_expr(scope);
            expect(Tok::RParen);
            return inner;
        }
        if (at(Tok::Ident)) {
            // Globals: block.number, msg.sender, msg.value
            if (peek().kind == Tok::Dot && peek(2).kind == Tok::Ident &&
                is_global_pair(cur().text, peek(2).text)) {
                std::string base = take().text;
                take(); // dot
                std::string field = take().text;
                e->kind = ExprKind::GlobalRef;
                e->global = base == "block" ? GlobalKind::BlockNumber
                            : field == "sender" ? GlobalKind::MsgSender
                                                : GlobalKind::MsgValue;
                return e;
            }
            Token name = take();
            e->name = name.text;
            if (accept(Tok::LBracket)) {
                e->kind = ExprKind::MapIndex;
                e->a = parse_expr(scope);
                expect(Tok::RBracket);
                resolve_map(*e, scope);
                return e;
            }
            e->kind = ExprKind::VarRef;
            resolve_var(*e, scope);
            return e;
        }
        throw Diagnostic(DiagKind::SyntaxError, e->loc,
                         std::string("expected an expression, found ") + tok_name(cur().kind));
    }
};

} // namespace

const FunctionDef* ContractDef::find_function(const std::string& fname) const {
    for (const auto& f : functions)
        if (f.name == fname) return &f;
    return nullptr;
}

const StateVar* ContractDef::find_state_var(const std::string& vname) const {
    for (const auto& sv : state_vars)
        if (sv.name == vname) return &sv;
    return nullptr;
}

ContractDef parse(std::string_view source) {
    Parser p(lex(source));
    return p.parse_contract();
}

} // namespace lazyc::mcl
