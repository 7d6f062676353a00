#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "superint/expr.hpp"

namespace superint {

using Monomial = std::vector<int>;  // exponents of x_1..x_k, trailing zeros trimmed

// Multivariate polynomial with exact rational coefficients; the canonical form
// behind the exact identity checks.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(const Rational& c);
    static Polynomial var(int i);
    static Polynomial monomial(const Monomial& mono, const Rational& c);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    bool isConstant() const;
    Rational constantTerm() const;
    int degree() const;
    int numVars() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const Rational& c) const;
    Polynomial pow(unsigned k) const;
    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    double evalAt(std::span<const double> x) const;
    ScalarExpr toExpr() const;
    Polynomial diff(int i) const;

    // graded-lex leading monomial
    std::pair<Monomial, Rational> leading() const;
    // a = q*g + r with no term of r divisible by lead(g); canonical for a single divisor
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& g);

private:
    void add(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

// nullopt when the expression is not a polynomial with exact rational coefficients
std::optional<Polynomial> toPolynomial(const ScalarExpr& e);

// Rebuild e in canonical polynomial form when it is a polynomial, else return e.
ScalarExpr canonical(const ScalarExpr& e);

bool gradedLexLess(const Monomial& a, const Monomial& b);

}  // namespace superint
