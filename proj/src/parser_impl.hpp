#pragma once

// Recursive-descent parser shared by the scalar and superfunction front ends.
// Grammar: expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
// unary := '-' unary | power ; power := atom ('^' unary)? ; atom := NUMBER |
// IDENT | FUNC '(' expr ')' | '(' expr ')'.

#include <cctype>
#include <string>
#include <string_view>

#include "superint/errors.hpp"
#include "superint/grassmann.hpp"

namespace superint::detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
    Coeff number;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        Token t{Tok::End, pos_, {}, {}};
        if (pos_ >= s_.size()) return t;
        char c = s_[pos_];
        switch (c) {
            case '+': ++pos_; t.kind = Tok::Plus; return t;
            case '-': ++pos_; t.kind = Tok::Minus; return t;
            case '*': ++pos_; t.kind = Tok::Star; return t;
            case '/': ++pos_; t.kind = Tok::Slash; return t;
            case '^': ++pos_; t.kind = Tok::Caret; return t;
            case '(': ++pos_; t.kind = Tok::LParen; return t;
            case ')': ++pos_; t.kind = Tok::RParen; return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            t.kind = Tok::Ident;
            t.text = std::string(s_.substr(b, pos_ - b));
            return t;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

private:
    static bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

    Token number(Token t) {
        std::size_t b = pos_;
        std::string intPart, fracPart;
        while (pos_ < s_.size() && digit(s_[pos_])) intPart += s_[pos_++];
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && digit(s_[pos_])) fracPart += s_[pos_++];
        }
        if (intPart.empty() && fracPart.empty()) throw SyntaxError("malformed number", b);
        Rational v(boost::multiprecision::cpp_int(intPart.empty() ? "0" : intPart));
        if (!fracPart.empty()) {
            boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(fracPart.size()));
            v += Rational(boost::multiprecision::cpp_int(fracPart), scale);
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
            std::string e;
            while (pos_ < s_.size() && digit(s_[pos_])) e += s_[pos_++];
            if (e.empty()) {
                pos_ = save;
            } else {
                boost::multiprecision::cpp_int scale = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(std::stoul(e)));
                v = neg ? Rational(v / scale) : Rational(v * scale);
            }
        }
        t.kind = Tok::Number;
        t.number = Coeff(v);
        t.text = std::string(s_.substr(b, pos_ - b));
        return t;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

// Builder must provide: using Value; Value number(const Coeff&, offset);
// Value ident(const std::string&, offset); Value call(const std::string&, Value, offset);
// Value add/sub/mul/div/pow(Value, Value, offset); Value neg(Value, offset); bool isFunction(name).
template <class Builder>
class Parser {
public:
    using Value = typename Builder::Value;

    Parser(std::string_view text, Builder& b) : lex_(text), b_(b) { advance(); }

    Value parseAll() {
        Value v = expr();
        if (cur_.kind != Tok::End) throw SyntaxError("unexpected token '" + describe(cur_) + "'", cur_.offset);
        return v;
    }

private:
    void advance() { cur_ = lex_.next(); }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Tok::Number:
            case Tok::Ident: return t.text;
            case Tok::Plus: return "+";
            case Tok::Minus: return "-";
            case Tok::Star: return "*";
            case Tok::Slash: return "/";
            case Tok::Caret: return "^";
            case Tok::LParen: return "(";
            case Tok::RParen: return ")";
            case Tok::End: return "end of input";
        }
        return "?";
    }

    Value expr() {
        Value v = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            Tok k = cur_.kind;
            std::size_t off = cur_.offset;
            advance();
            Value r = term();
            v = k == Tok::Plus ? b_.add(v, r, off) : b_.sub(v, r, off);
        }
        return v;
    }

    Value term() {
        Value v = unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            Tok k = cur_.kind;
            std::size_t off = cur_.offset;
            advance();
            Value r = unary();
            v = k == Tok::Star ? b_.mul(v, r, off) : b_.div(v, r, off);
        }
        return v;
    }

    Value unary() {
        if (cur_.kind == Tok::Minus) {
            std::size_t off = cur_.offset;
            advance();
            return b_.neg(unary(), off);
        }
        return power();
    }

    Value power() {
        Value base = atom();
        if (cur_.kind == Tok::Caret) {
            std::size_t off = cur_.offset;
            advance();
            Value e = unary();
            return b_.pow(base, e, off);
        }
        return base;
    }

    Value atom() {
        Token t = cur_;
        switch (t.kind) {
            case Tok::Number: advance(); return b_.number(t.number, t.offset);
            case Tok::LParen: {
                advance();
                Value v = expr();
                expect(Tok::RParen, ")");
                return v;
            }
            case Tok::Ident: {
                advance();
                if (b_.isFunction(t.text)) {
                    expect(Tok::LParen, "(");
                    Value arg = expr();
                    expect(Tok::RParen, ")");
                    return b_.call(t.text, arg, t.offset);
                }
                return b_.ident(t.text, t.offset);
            }
            case Tok::End: throw SyntaxError("unexpected end of input", t.offset);
            default: throw SyntaxError("unexpected token '" + describe(t) + "'", t.offset);
        }
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) throw SyntaxError(std::string("expected '") + what + "'", cur_.offset);
        advance();
    }

    Lexer lex_;
    Builder& b_;
    Token cur_{Tok::End, 0, {}, {}};
};

// x<digits> with 1 <= k (and k <= maxVar when maxVar > 0); returns 0 if not of that form
inline int variableIndex(const std::string& name) {
    if (name.size() < 2 || name[0] != 'x') return 0;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
    if (name.size() > 6) return 0;
    return std::stoi(name.substr(1));
}

}  // namespace superint::detail
