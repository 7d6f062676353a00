#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "superint/expr.hpp"
#include "superint/grassmann.hpp"

namespace superint {

// F(x) = sum_A F_A(x) x`_A with scalar expression coefficients.
class SuperFunction {
public:
    SuperFunction() = default;
    explicit SuperFunction(const SuperContext& ctx);
    SuperFunction(const SuperContext& ctx, const ScalarExpr& body);
    static SuperFunction generator(const SuperContext& ctx, int i);  // x`_i
    static SuperFunction coordinate(const SuperContext& ctx, int j);  // x_j
    static SuperFunction monomial(const SuperContext& ctx, Blade b, const ScalarExpr& c);
    static SuperFunction fromGrassmann(const SuperContext& ctx, const GrassmannElement& g);

    const SuperContext& context() const { return ctx_; }
    const std::map<Blade, ScalarExpr>& terms() const { return terms_; }
    ScalarExpr component(Blade b) const;
    ScalarExpr body() const { return component(0); }
    SuperFunction nilpotent() const;
    bool isZero() const { return terms_.empty(); }
    bool isEven() const;
    bool isOdd() const;
    // every coefficient is an exact-rational polynomial
    bool isPolynomial() const;

    SuperFunction operator-() const;
    friend SuperFunction operator+(const SuperFunction& a, const SuperFunction& b);
    friend SuperFunction operator-(const SuperFunction& a, const SuperFunction& b);
    friend SuperFunction operator*(const SuperFunction& a, const SuperFunction& b);
    SuperFunction scaled(const ScalarExpr& c) const;
    SuperFunction star() const;

    GrassmannElement evalAt(std::span<const double> x) const;
    std::string str() const;

private:
    void addTerm(Blade b, const ScalarExpr& c);
    void normalize();
    SuperContext ctx_;
    std::map<Blade, ScalarExpr> terms_;
};

SuperFunction smul(const SuperFunction& a, const SuperFunction& b);
SuperFunction sadd(const SuperFunction& a, const SuperFunction& b);
SuperFunction star(const SuperFunction& f);

// Exact for polynomial coefficients; otherwise by sampling points where both sides evaluate.
bool equivalent(const SuperFunction& a, const SuperFunction& b, double tol = 1e-9);

SuperFunction bosPartial(const SuperFunction& f, int j);
// removes x`_j with the sign of moving the derivative past the earlier generators
SuperFunction ferPartial(const SuperFunction& f, int j);

// analytic primitive used by compose
struct AnalyticFn {
    Op op = Op::Exp;  // Exp, Log, Sqrt, Sin, Cos, Asinh, or Pow with exponent p
    Coeff p = Coeff(1);
    static AnalyticFn power(const Coeff& p) { return {Op::Pow, p}; }
    ScalarExpr apply(const ScalarExpr& t) const;
};

SuperFunction compose(const AnalyticFn& f, const SuperFunction& a);
SuperFunction powerSF(const SuperFunction& a, const Coeff& p);
// h^-1 by the finite geometric series; needs h0 away from 0 where evaluated
SuperFunction inverse(const SuperFunction& h);
// throws RefusalError unless |h0| > 1e-9 at every sample point
void certifyBody(const SuperFunction& h, const std::vector<std::vector<double>>& points, double threshold = 1e-9);
SuperFunction pow(const SuperFunction& a, unsigned k);

struct SuperVectorField {
    SuperContext ctx;
    std::vector<SuperFunction> bos;  // e_1..e_m
    std::vector<SuperFunction> fer;  // e`_1..e`_2n

    SuperVectorField() = default;
    explicit SuperVectorField(const SuperContext& ctx);
    // the coordinate supervector x = x_ + x`
    static SuperVectorField coordinate(const SuperContext& ctx);
    SuperVectorField scaled(const SuperFunction& a) const;
    bool isZero() const;
    friend SuperVectorField operator+(const SuperVectorField& a, const SuperVectorField& b);
    friend SuperVectorField operator-(const SuperVectorField& a, const SuperVectorField& b);
};

SuperFunction vsquare(const SuperVectorField& v);
SuperFunction modulusSF(const SuperVectorField& v);
SuperVectorField superGradient(const SuperFunction& g);
SuperFunction superLaplace(const SuperFunction& f);

// x^2 = -sum x_j^2 + sum x`_{2j-1} x`_{2j}
SuperFunction superSquare(const SuperContext& ctx);
// |x| = (-x^2)^(1/2)
SuperFunction superAbs(const SuperContext& ctx);

// Superfunction literal: the scalar grammar plus q1..q2n, X2 and ABSX.
SuperFunction parseSuperFunction(std::string_view text, const SuperContext& ctx);

}  // namespace superint
