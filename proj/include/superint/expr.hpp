#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superint/grassmann.hpp"

namespace superint {

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log, Sqrt, Sin, Cos, Asinh, Abs };

class ScalarExpr;

struct ExprNode;

// Immutable AST handle. Construction goes through folding constructors, so
// constants are folded and x*0, x+0 (and x*1) are dropped.
class ScalarExpr {
public:
    ScalarExpr();  // constant 0
    ScalarExpr(const Coeff& c);
    ScalarExpr(int c) : ScalarExpr(Coeff(c)) {}
    ScalarExpr(double c) : ScalarExpr(Coeff(c)) {}

    static ScalarExpr constant(const Coeff& c) { return ScalarExpr(c); }
    static ScalarExpr var(int i);  // x_i, 1-based
    static ScalarExpr func(Op f, const ScalarExpr& a);

    Op op() const;
    bool isConst() const { return op() == Op::Const; }
    bool isZero() const;
    bool isOne() const;
    const Coeff& value() const;       // Const only
    int varIndex() const;             // Var only
    const Coeff& exponent() const;    // Pow only
    const ScalarExpr& lhs() const;
    const ScalarExpr& rhs() const;
    const ExprNode* node() const { return p_.get(); }

    int maxVar() const;
    std::size_t size() const;
    std::string str() const;
    double evalAt(std::span<const double> point) const;

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
    ScalarExpr operator-() const;

private:
    explicit ScalarExpr(std::shared_ptr<const ExprNode> p) : p_(std::move(p)) {}
    // empty child slot of a leaf node; never escapes ExprNode
    struct Hollow {};
    explicit ScalarExpr(Hollow) {}
    friend struct ExprNode;
    friend ScalarExpr makeNode(Op, Coeff, int, ScalarExpr, ScalarExpr);
    std::shared_ptr<const ExprNode> p_;
};

struct ExprNode {
    Op op;
    Coeff value;  // Const value or Pow exponent
    int var = 0;
    ScalarExpr a{ScalarExpr::Hollow{}}, b{ScalarExpr::Hollow{}};
};

ScalarExpr pow(const ScalarExpr& a, const Coeff& p);
ScalarExpr exp(const ScalarExpr& a);
ScalarExpr log(const ScalarExpr& a);
ScalarExpr sqrt(const ScalarExpr& a);
ScalarExpr sin(const ScalarExpr& a);
ScalarExpr cos(const ScalarExpr& a);
ScalarExpr asinh(const ScalarExpr& a);
ScalarExpr abs(const ScalarExpr& a);

const char* funcName(Op f);

// maxVar = 0 disables the x<k> range check
ScalarExpr parse(std::string_view text, int maxVar = 0);
std::string print(const ScalarExpr& e);
double evalAt(const ScalarExpr& e, std::span<const double> point);
ScalarExpr diff(const ScalarExpr& e, int i);
// replaces x_i by subs[i-1]
ScalarExpr substitute(const ScalarExpr& e, const std::vector<ScalarExpr>& subs);
bool structurallyEqual(const ScalarExpr& a, const ScalarExpr& b);
// checks e is constant in all variables by sampling; used for parity/shape tests
bool dependsOn(const ScalarExpr& e, int i);

// Flat stack program for fast repeated evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const ScalarExpr& e);
    double operator()(const double* x) const;
    std::size_t length() const { return code_.size(); }

    // postfix program: Const pushes value, Var pushes x[var], Pow carries its exponent in value
    struct Instr {
        Op op;
        int var;
        double value;
    };
    const std::vector<Instr>& code() const { return code_; }
    std::size_t depth() const { return depth_; }

private:
    std::vector<Instr> code_;
    std::size_t depth_ = 0;
};

}  // namespace superint
