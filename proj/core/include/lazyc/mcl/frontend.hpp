#pragma once

#include "lazyc/mcl/ast.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace lazyc::mcl {

enum class DiagKind : uint8_t {
    SyntaxError,
    NameError,
    TypeError,
    PayabilityError,
};

const char* diag_kind_name(DiagKind k);

// Frontend diagnostic with source position; thrown by parse/validate.
struct Diagnostic : std::runtime_error {
    DiagKind kind;
    SrcLoc loc;

    Diagnostic(DiagKind kind, SrcLoc loc, const std::string& msg);
};

// Parses one `.mcl` source into an AST with all identifiers resolved
// (params, locals, state vars, globals). Throws Diagnostic on syntax or
// name errors. Deterministic: identical bytes yield identical ASTs.
ContractDef parse(std::string_view source);

// Type-checks expressions, enforces the payability rule (msg.value only in
// payable functions) and annotates every function with its globals usage.
// Throws Diagnostic (TypeError / PayabilityError).
ValidatedContract validate(ContractDef contract);

// Exactly the set of global refs appearing syntactically in f's body, plus
// msg.value when f is payable (the lazy prologue reads it).
GlobalsUsage analyze_globals(const FunctionDef& f);

// Canonical source form; parse(pretty_print(c)) is structurally identical
// to c for every parser-produced contract.
std::string pretty_print(const ContractDef& contract);
std::string pretty_print(const Expr& e);
std::string pretty_print(const Stmt& s, int indent = 0);

} // namespace lazyc::mcl
