#pragma once

#include "lazyc/u256.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lazyc::mcl {

struct SrcLoc {
    uint32_t line = 0;
    uint32_t col = 0;
};

enum class McType : uint8_t { Uint, Address, Bool, Map }; // Map = map(address => uint)

const char* type_name(McType t);

enum class GlobalKind : uint8_t { BlockNumber, MsgSender, MsgValue };

const char* global_name(GlobalKind g);

enum class BinOp : uint8_t {
    Add, Sub, Mul, Div, Mod,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or,
};

const char* binop_token(BinOp op);

// Where a VarRef resolves. Filled in by the parser's resolve pass.
enum class RefKind : uint8_t { Unresolved, Param, Local, State };

enum class ExprKind : uint8_t {
    IntLit,
    AddrLit,     // @label or 0x... literal, stored as text label
    BoolLit,
    ThisAddr,    // the enclosing contract's own address
    VarRef,      // param, local or state variable (scalar)
    GlobalRef,   // block.number / msg.sender / msg.value
    Binary,
    Not,
    Hash,        // hash(e) -> uint digest of e's canonical encoding
    BalanceOf,   // balance(e); `this.balance` parses to BalanceOf(ThisAddr)
    MapIndex,    // m[key] where m is a state map
    // Extended kinds produced only by the lazy rewriter, never by the parser:
    LBal,        // b[e] - the wrapper's virtual balance of an address
    SnapGlobal,  // get_v(k) - global value recorded in the ledger entry
};

struct Expr {
    ExprKind kind{};
    SrcLoc loc;

    U256 int_val;            // IntLit
    bool bool_val = false;   // BoolLit
    std::string name;        // AddrLit label; VarRef/MapIndex variable name
    GlobalKind global{};     // GlobalRef / SnapGlobal
    BinOp op{};              // Binary
    std::unique_ptr<Expr> a; // left / sole child / map key / hash arg
    std::unique_ptr<Expr> b; // right child

    // Annotations (resolve + typecheck).
    RefKind ref = RefKind::Unresolved;
    uint32_t slot = 0;       // Param/Local index
    std::string state_key;   // qualified "Contract.var" for State refs
    McType type = McType::Uint;

    std::unique_ptr<Expr> clone() const;
};

using ExprPtr = std::unique_ptr<Expr>;

bool structurally_equal(const Expr& a, const Expr& b);

enum class StmtKind : uint8_t {
    LocalDecl, // decl_type name [= e1]
    Assign,    // lvalue (in e1) = e2; lvalue is VarRef, MapIndex or LBal
    If,        // e1 cond, body / els
    While,     // e1 cond, body
    Require,   // require(e1)
    Transfer,  // transfer(e1 addr, e2 amount) from the contract's own funds
    ExprStmt,  // e1
    CallStmt,  // callee_contract.callee_fn(args) within the wrapped bundle
};

struct Stmt {
    StmtKind kind{};
    SrcLoc loc;

    McType decl_type = McType::Uint;
    std::string name;     // LocalDecl variable name
    uint32_t slot = 0;    // LocalDecl slot
    std::string callee_contract; // CallStmt (empty = same contract)
    std::string callee_fn;       // CallStmt
    ExprPtr e1;
    ExprPtr e2;
    std::vector<ExprPtr> args;
    std::vector<Stmt> body;
    std::vector<Stmt> els;

    Stmt clone() const;
};

bool structurally_equal(const Stmt& a, const Stmt& b);

// Set of globals a function needs recorded in its ledger snapshot.
struct GlobalsUsage {
    bool block_number = false;
    bool msg_sender = false;
    bool msg_value = false;

    bool contains(GlobalKind g) const {
        switch (g) {
        case GlobalKind::BlockNumber: return block_number;
        case GlobalKind::MsgSender: return msg_sender;
        case GlobalKind::MsgValue: return msg_value;
        }
        return false;
    }
    void add(GlobalKind g) {
        switch (g) {
        case GlobalKind::BlockNumber: block_number = true; break;
        case GlobalKind::MsgSender: msg_sender = true; break;
        case GlobalKind::MsgValue: msg_value = true; break;
        }
    }
    void merge(const GlobalsUsage& o) {
        block_number |= o.block_number;
        msg_sender |= o.msg_sender;
        msg_value |= o.msg_value;
    }
    int count() const { return int(block_number) + int(msg_sender) + int(msg_value); }
    friend bool operator==(const GlobalsUsage&, const GlobalsUsage&) = default;
};

struct Param {
    std::string name;
    McType type;
    friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionDef {
    std::string name;
    std::vector<Param> params;
    bool payable = false;
    std::vector<Stmt> body;

    // Annotations.
    uint32_t local_count = 0;        // locals beyond params (frame size = params + locals)
    GlobalsUsage usage;              // syntactic usage, set by validate
    bool rewritten = false;          // set by the lazy rewriter, guards re-entry

    FunctionDef clone() const;
};

bool structurally_equal(const FunctionDef& a, const FunctionDef& b);

struct StateVar {
    std::string name;
    McType type;
    ExprPtr init; // literal initializer or null

    StateVar clone() const;
};

struct ContractDef {
    std::string name;
    std::vector<StateVar> state_vars;
    std::vector<FunctionDef> functions;

    const FunctionDef* find_function(const std::string& fname) const;
    const StateVar* find_state_var(const std::string& vname) const;

    ContractDef clone() const;
};

bool structurally_equal(const ContractDef& a, const ContractDef& b);

// A contract that passed validate(): typed, payability-checked, and with
// per-function globals usage recorded.
struct ValidatedContract {
    ContractDef def;
};

} // namespace lazyc::mcl
