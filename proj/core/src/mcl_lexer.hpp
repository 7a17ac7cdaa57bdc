#pragma once

#include "lazyc/mcl/ast.hpp"
#include "lazyc/mcl/frontend.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lazyc::mcl {

enum class Tok : uint8_t {
    Ident, Int, AddrLit,
    KwContract, KwFunction, KwPayable, KwUint, KwAddress, KwBool, KwMap,
    KwIf, KwElse, KwWhile, KwRequire, KwTransfer, KwBalance, KwHash,
    KwTrue, KwFalse, KwThis,
    LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Semi, Dot, Arrow, // Arrow = "=>"
    Assign, Eq, Ne, Lt, Le, Gt, Ge,
    Plus, Minus, Star, Slash, Percent,
    AndAnd, OrOr, Bang,
    End,
};

struct Token {
    Tok kind;
    SrcLoc loc;
    std::string text; // identifier / literal spelling
};

// Tokenizes the whole input; throws Diagnostic(SyntaxError) on bad bytes.
std::vector<Token> lex(std::string_view source);

const char* tok_name(Tok t);

} // namespace lazyc::mcl
