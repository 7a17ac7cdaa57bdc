#include "mcl_lexer.hpp"

#include <cctype>
#include <map>

namespace lazyc::mcl {

const char* diag_kind_name(DiagKind k) {
    switch (k) {
    case DiagKind::SyntaxError: return "SyntaxError";
    case DiagKind::NameError: return "NameError";
    case DiagKind::TypeError: return "TypeError";
    case DiagKind::PayabilityError: return "PayabilityError";
    }
    return "?";
}

Diagnostic::Diagnostic(DiagKind kind, SrcLoc loc, const std::string& msg)
    : std::runtime_error(std::string(diag_kind_name(kind)) + " at " +
                         std::to_string(loc.line) + ":" + std::to_string(loc.col) +
                         ": " + msg),
      kind(kind), loc(loc) {}

namespace {

const std::map<std::string_view, Tok> kKeywords = {
    {"contract", Tok::KwContract}, {"function", Tok::KwFunction},
    {"payable", Tok::KwPayable},   {"uint", Tok::KwUint},
    {"address", Tok::KwAddress},   {"bool", Tok::KwBool},
    {"map", Tok::KwMap},           {"if", Tok::KwIf},
    {"else", Tok::KwElse},         {"while", Tok::KwWhile},
    {"require", Tok::KwRequire},   {"transfer", Tok::KwTransfer},
    {"balance", Tok::KwBalance},   {"hash", Tok::KwHash},
    {"true", Tok::KwTrue},         {"false", Tok::KwFalse},
    {"this", Tok::KwThis},
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_cont(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

} // namespace

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    uint32_t line = 1, col = 1;
    size_t i = 0;

    auto loc = [&] { return SrcLoc{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t j = 0; j < n; ++j) {
            if (src[i + j] == '\n') { ++line; col = 1; } else { ++col; }
        }
        i += n;
    };
    auto push = [&](Tok t, SrcLoc l, std::string text = {}) {
        out.push_back(Token{t, l, std::move(text)});
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SrcLoc l = loc();
        if (ident_start(c)) {
            size_t j = i;
            while (j < src.size() && ident_cont(src[j])) ++j;
            std::string_view word = src.substr(i, j - i);
            auto kw = kKeywords.find(word);
            if (kw != kKeywords.end()) push(kw->second, l);
            else push(Tok::Ident, l, std::string(word));
            advance(j - i);
            continue;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t j = i;
            bool hex = (c == '0' && j + 1 < src.size() &&
                        (src[j + 1] == 'x' || src[j + 1] == 'X'));
            if (hex) {
                j += 2;
                while (j < src.size() && std::isxdigit((unsigned char)src[j])) ++j;
                // 0x literals denote addresses, matching on-chain conventions
                push(Tok::AddrLit, l, std::string(src.substr(i, j - i)));
            } else {
                while (j < src.size() && std::isdigit((unsigned char)src[j])) ++j;
                push(Tok::Int, l, std::string(src.substr(i, j - i)));
            }
            advance(j - i);
            continue;
        }
        if (c == '@') {
            size_t j = i + 1;
            if (j >= src.size() || !ident_start(src[j]))
                throw Diagnostic(DiagKind::SyntaxError, l, "expected label after '@'");
            while (j < src.size() && ident_cont(src[j])) ++j;
            push(Tok::AddrLit, l, std::string(src.substr(i + 1, j - i - 1)));
            advance(j - i);
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < src.size() && src[i + 1] == b;
        };
        if (two('=', '=')) { push(Tok::Eq, l); advance(2); continue; }
        if (two('!', '=')) { push(Tok::Ne, l); advance(2); continue; }
        if (two('<', '=')) { push(Tok::Le, l); advance(2); continue; }
        if (two('>', '=')) { push(Tok::Ge, l); advance(2); continue; }
        if (two('&', '&')) { push(Tok::AndAnd, l); advance(2); continue; }
        if (two('|', '|')) { push(Tok::OrOr, l); advance(2); continue; }
        if (two('=', '>')) { push(Tok::Arrow, l); advance(2); continue; }
        Tok t;
        switch (c) {
        case '(': t = Tok::LParen; break;
        case ')': t = Tok::RParen; break;
        case '{': t = Tok::LBrace; break;
        case '}': t = Tok::RBrace; break;
        case '[': t = Tok::LBracket; break;
        case ']': t = Tok::RBracket; break;
        case ',': t = Tok::Comma; break;
        case ';': t = Tok::Semi; break;
        case '.': t = Tok::Dot; break;
        case '=': t = Tok::Assign; break;
        case '<': t = Tok::Lt; break;
        case '>': t = Tok::Gt; break;
        case '+': t = Tok::Plus; break;
        case '-': t = Tok::Minus; break;
        case '*': t = Tok::Star; break;
        case '/': t = Tok::Slash; break;
        case '%': t = Tok::Percent; break;
        case '!': t = Tok::Bang; break;
        default:
            throw Diagnostic(DiagKind::SyntaxError, l,
                             std::string("unexpected character '") + c + "'");
        }
        push(t, l);
        advance(1);
    }
    out.push_back(Token{Tok::End, loc(), {}});
    return out;
}

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::AddrLit: return "address literal";
    case Tok::KwContract: return "'contract'";
    case Tok::KwFunction: return "'function'";
    case Tok::KwPayable: return "'payable'";
    case Tok::KwUint: return "'uint'";
    case Tok::KwAddress: return "'address'";
    case Tok::KwBool: return "'bool'";
    case Tok::KwMap: return "'map'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwRequire: return "'require'";
    case Tok::KwTransfer: return "'transfer'";
    case Tok::KwBalance: return "'balance'";
    case Tok::KwHash: return "'hash'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwThis: return "'this'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Arrow: return "'=>'";
    case Tok::Assign: return "'='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
    }
    return "?";
}

} // namespace lazyc::mcl
