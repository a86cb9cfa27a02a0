#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hamtrio/expr.hpp"

namespace hamtrio::text {

enum class Tok { Ident, Number, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, Equals, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

/// Splits source text into tokens. `#` starts a comment; newlines are only
/// reported outside brackets and parentheses, so bracketed values may span lines.
std::vector<Token> tokenize(std::string_view source);

const char* token_name(Tok t);

/// Cursor over a token stream with error reporting helpers.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}
    const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    bool accept(Tok t);
    const Token& expect(Tok t, const char* what);
    bool at(Tok t) const { return peek().kind == t; }
    [[noreturn]] void fail(const std::string& msg) const;
    [[noreturn]] static void fail_at(const Token& t, const std::string& msg);

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

/// Parses a scalar expression: u1, u2x, u1_3, psi1_2x, parameters, + - * / ^,
/// sqrt(...), integer and decimal literals.
jet::Expr parse_expression(std::string_view source);

/// Parses one scalar expression from the stream (stops at a token that cannot continue it).
jet::Expr parse_expression(TokenStream& ts);

/// Exact rational value of an integer or decimal literal.
jet::Rational parse_number(const Token& t);

}  // namespace hamtrio::text
