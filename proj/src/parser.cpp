#include "dltl/errors.hpp"
#include "dltl/formula.hpp"

#include <cctype>

namespace dltl {

namespace {

enum class Tok { Ident, Bang, Amp, Bar, LParen, RParen, LBrack, RBrack, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t{Tok::End, "", line_, col_};
        if (pos_ >= src_.size()) return t;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            t.kind = Tok::Ident;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        advance();
        switch (c) {
        case '!': t.kind = Tok::Bang; break;
        case '&': t.kind = Tok::Amp; break;
        case '|': t.kind = Tok::Bar; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBrack; break;
        case ']': t.kind = Tok::RBrack; break;
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
        t.text = std::string(1, c);
        return t;
    }

    // Raw discount literal up to the closing bracket.
    Token discount() {
        skip_ws();
        Token t{Tok::Ident, "", line_, col_};
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        return t;
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }

    std::string_view src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

bool valid_discount_syntax(const std::string& s) {
    auto digits = [&](std::size_t& i) {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        return i > start;
    };
    std::size_t i = 0;
    if (!digits(i)) return false;
    if (i == s.size()) return true;
    if (s[i] == '.' || s[i] == '/') {
        ++i;
        return digits(i) && i == s.size();
    }
    return false;
}

bool reserved(const std::string& s) {
    return s == "X" || s == "F" || s == "G" || s == "U" || s == "true" || s == "false";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    Formula run() {
        Formula f = or_expr();
        if (cur_.kind != Tok::End) fail("unexpected '" + cur_.text + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur_.line, cur_.col); }
    void shift() { cur_ = lex_.next(); }
    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what);
        shift();
    }

    Formula or_expr() {
        Formula f = and_expr();
        while (cur_.kind == Tok::Bar) {
            shift();
            f = lor(f, and_expr());
        }
        return f;
    }

    Formula and_expr() {
        Formula f = until_expr();
        while (cur_.kind == Tok::Amp) {
            shift();
            f = land(f, until_expr());
        }
        return f;
    }

    Formula until_expr() {
        Formula f = unary();
        if (cur_.kind == Tok::Ident && cur_.text == "U") {
            Rational l = bracket_discount();
            return until(l, f, until_expr());
        }
        return f;
    }

    // current token is the operator keyword; consumes "[disc]"
    Rational bracket_discount() {
        shift();
        if (cur_.kind != Tok::LBrack) fail("expected '[' after temporal operator");
        Token d = lex_.discount();
        if (!valid_discount_syntax(d.text))
            throw ParseError("malformed discount '" + d.text + "'", d.line, d.col);
        Rational l = Rational::parse(d.text);
        if (l >= 1) throw ParseError("discount must be < 1", d.line, d.col);
        shift();
        expect(Tok::RBrack, "']'");
        return l;
    }

    Formula unary() {
        switch (cur_.kind) {
        case Tok::Bang:
            shift();
            return neg(unary());
        case Tok::LParen: {
            shift();
            Formula f = or_expr();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::Ident: {
            std::string w = cur_.text;
            if (w == "X" || w == "F" || w == "G") {
                Rational l = bracket_discount();
                Formula a = unary();
                return w == "X" ? next(l, a) : w == "F" ? finally(l, a) : globally(l, a);
            }
            if (w == "true") { shift(); return top(); }
            if (w == "false") { shift(); return bottom(); }
            if (reserved(w)) fail("unexpected keyword '" + w + "'");
            shift();
            return atom(w);
        }
        case Tok::End: fail("unexpected end of input");
        default: fail("unexpected '" + cur_.text + "'");
        }
    }

    Lexer lex_;
    Token cur_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

}  // namespace dltl
