#include "hamtrio/parse.hpp"

#include <cctype>

#include "hamtrio/errors.hpp"

namespace hamtrio::text {

using jet::Expr;
using jet::Rational;

const char* token_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Equals: return "'='";
        case Tok::Newline: return "end of line";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (; n && i < src.size(); --n, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        if (c == '\n') {
            if (depth == 0 && !out.empty() && out.back().kind != Tok::Newline) out.push_back({Tok::Newline, "\n", line, col});
            advance();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        int l = line, k = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, k});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            bool dot = false;
            while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || (src[j] == '.' && !dot))) {
                if (src[j] == '.') dot = true;
                ++j;
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, k});
            advance(j - i);
            continue;
        }
        Tok t;
        switch (c) {
            case '+': t = Tok::Plus; break;
            case '-': t = Tok::Minus; break;
            case '*': t = Tok::Star; break;
            case '/': t = Tok::Slash; break;
            case '^': t = Tok::Caret; break;
            case '(': t = Tok::LParen; ++depth; break;
            case ')': t = Tok::RParen; depth = std::max(0, depth - 1); break;
            case '[': t = Tok::LBracket; ++depth; break;
            case ']': t = Tok::RBracket; depth = std::max(0, depth - 1); break;
            case ',': t = Tok::Comma; break;
            case '=': t = Tok::Equals; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", l, k);
        }
        out.push_back({t, std::string(1, c), l, k});
        advance();
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
    std::size_t p = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[p];
}

const Token& TokenStream::next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
}

bool TokenStream::accept(Tok t) {
    if (!at(t)) return false;
    next();
    return true;
}

const Token& TokenStream::expect(Tok t, const char* what) {
    if (!at(t)) fail(std::string("expected ") + what + ", found " + (peek().text.empty() || peek().kind == Tok::Newline ? token_name(peek().kind) : "'" + peek().text + "'"));
    return next();
}

void TokenStream::fail(const std::string& msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token& t, const std::string& msg) { throw ParseError(msg, t.line, t.column); }

Rational parse_number(const Token& t) {
    auto dot = t.text.find('.');
    if (dot == std::string::npos) return Rational(t.text, 10);
    std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
    if (digits.empty()) TokenStream::fail_at(t, "malformed number");
    mpz_class num(digits, 10), den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, t.text.size() - dot - 1);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

Expr parse_sum(TokenStream& ts);

Expr parse_primary(TokenStream& ts) {
    const Token& t = ts.peek();
    if (t.kind == Tok::Number) return Expr(parse_number(ts.next()));
    if (t.kind == Tok::LParen) {
        ts.next();
        Expr e = parse_sum(ts);
        ts.expect(Tok::RParen, "')'");
        return e;
    }
    if (t.kind == Tok::Ident) {
        Token id = ts.next();
        if (id.text == "sqrt") {
            ts.expect(Tok::LParen, "'(' after sqrt");
            Expr r = parse_sum(ts);
            ts.expect(Tok::RParen, "')'");
            return Expr::sqrt(r);
        }
        if (ts.at(Tok::LParen)) TokenStream::fail_at(id, "unknown function '" + id.text + "'");
        return Expr::var(jet::Vars::from_name(id.text));
    }
    ts.fail(std::string("expected an expression, found ") + token_name(t.kind));
}

int parse_exponent(TokenStream& ts) {
    bool paren = ts.accept(Tok::LParen);
    bool neg = ts.accept(Tok::Minus);
    const Token& n = ts.expect(Tok::Number, "integer exponent");
    if (n.text.find('.') != std::string::npos) TokenStream::fail_at(n, "exponent must be an integer");
    int e = std::stoi(n.text);
    if (paren) ts.expect(Tok::RParen, "')'");
    return neg ? -e : e;
}

Expr parse_power(TokenStream& ts) {
    Expr base = parse_primary(ts);
    if (ts.accept(Tok::Caret)) return base.pow(parse_exponent(ts));
    return base;
}

Expr parse_unary(TokenStream& ts) {
    if (ts.accept(Tok::Minus)) return -parse_unary(ts);
    if (ts.accept(Tok::Plus)) return parse_unary(ts);
    return parse_power(ts);
}

Expr parse_product(TokenStream& ts) {
    Expr e = parse_unary(ts);
    for (;;) {
        if (ts.accept(Tok::Star)) {
            e = e * parse_unary(ts);
        } else if (ts.at(Tok::Slash)) {
            Token slash = ts.next();
            Expr d = parse_unary(ts);
            if (d.is_zero()) TokenStream::fail_at(slash, "division by zero");
            e = e / d;
        } else {
            return e;
        }
    }
}

Expr parse_sum(TokenStream& ts) {
    std::vector<Expr> terms{parse_product(ts)};
    for (;;) {
        if (ts.accept(Tok::Plus))
            terms.push_back(parse_product(ts));
        else if (ts.accept(Tok::Minus))
            terms.push_back(-parse_product(ts));
        else
            return jet::sum(terms);
    }
}

}  // namespace

Expr parse_expression(TokenStream& ts) { return parse_sum(ts); }

Expr parse_expression(std::string_view source) {
    TokenStream ts(tokenize(source));
    while (ts.accept(Tok::Newline)) {
    }
    Expr e = parse_sum(ts);
    while (ts.accept(Tok::Newline)) {
    }
    if (!ts.at(Tok::End)) ts.fail("unexpected '" + ts.peek().text + "' after expression");
    return e;
}

}  // namespace hamtrio::text
