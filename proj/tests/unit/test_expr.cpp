#include <doctest.h>

#include <cmath>
#include <random>

#include "superint/errors.hpp"
#include "superint/expr.hpp"
#include "superint/polynomial.hpp"

using namespace superint;

TEST_CASE("parse and evaluate") {
    auto e = parse("x1^2 + x2^2 - x3");
    std::vector<double> p{3, 4, 5};
    CHECK(evalAt(e, p) == 20.0);
    CHECK(evalAt(parse("x1^2+x2^2"), std::vector<double>{3, 4}) == 25.0);
    CHECK(evalAt(parse("sqrt(x1*x1)"), std::vector<double>{-2}) == doctest::Approx(2.0));
    CHECK(evalAt(parse("exp(0*x1)"), std::vector<double>{7.5}) == 1.0);
    CHECK_THROWS_AS(evalAt(parse("log(x1)"), std::vector<double>{-1}), DomainError);
}

TEST_CASE("syntax errors report the offset") {
    try {
        parse("x1 +");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse("y1 + 2"), UnknownIdentifier);
    CHECK_THROWS_AS(parse("x4", 3), UnknownIdentifier);
    CHECK_THROWS_AS(parse("foo(x1)"), UnknownIdentifier);
}

TEST_CASE("rational and decimal literals are exact") {
    auto e = parse("1/3 + 0.25");
    REQUIRE(e.isConst());
    CHECK(e.value().exact());
    CHECK(e.value().approxEqual(Coeff::ratio(7, 12)));
    auto s = parse("x1^(1/2)");
    CHECK(s.op() == Op::Pow);
    CHECK(s.exponent().approxEqual(Coeff::ratio(1, 2)));
    // exponentiation binds tighter than division
    CHECK(parse("x1^2/2").op() == Op::Div);
}

TEST_CASE("printer round trips") {
    const char* corpus[] = {"x1^2 + x2^2 - x3", "sqrt(x1*x1)", "-(x1 - x2)^3", "exp(x1*x2)/(1 + x3^2)",
                            "asinh(2*x1) - log(abs(x2))", "x1^(1/2)*x2^(-3)", "(-2)*x1", "cos(sin(x1))^2",
                            "x1 - (x2 - x3)", "x1/(x2/x3)", "2^x1^0"};
    for (const char* t : corpus) {
        auto once = print(parse(t));
        auto twice = print(parse(once));
        CHECK_MESSAGE(once == twice, t);
        std::vector<double> p{0.7, 1.3, -0.4};
        double a = 0, b = 0;
        bool ok = true;
        try {
            a = evalAt(parse(t), p);
            b = evalAt(parse(once), p);
        } catch (const DomainError&) {
            ok = false;
        }
        if (ok) CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
}

TEST_CASE("symbolic derivatives") {
    CHECK(print(diff(parse("x1^2"), 1)) == print(parse("2*x1")));
    auto d = diff(parse("exp(x1*x2)"), 2);
    std::vector<double> p{0.3, 0.8};
    CHECK(evalAt(d, p) == doctest::Approx(0.3 * std::exp(0.24)));
    CHECK_THROWS_AS(evalAt(diff(parse("abs(x1)"), 1), std::vector<double>{0.0}), DomainError);
}

TEST_CASE("derivatives agree with central differences") {
    const char* corpus[] = {"exp(x1*x2) + sin(x3)", "log(1 + x1^2)*cos(x2)", "sqrt(2 + x1*x2*x3)",
                            "asinh(x1 - x3)/(3 + x2^2)", "(x1 + 2)^(5/2)*abs(x2 + 4)", "x1^3*x2 - x3^4 / 7"};
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (const char* t : corpus) {
        auto e = parse(t);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> p{U(rng), U(rng), U(rng)};
            for (int i = 1; i <= 3; ++i) {
                const double h = 1e-5;
                auto q = p, r = p;
                q[i - 1] += h;
                r[i - 1] -= h;
                double fd = (evalAt(e, q) - evalAt(e, r)) / (2 * h);
                double sym = evalAt(diff(e, i), p);
                CHECK(std::fabs(fd - sym) <= 1e-6 * (1 + std::fabs(sym)));
            }
        }
    }
}

TEST_CASE("compiled evaluation matches the tree") {
    auto e = parse("exp(x1*x2) + sin(x3)^2 - x1/(1+x2^2) + (x3+4)^(1/3)");
    CompiledExpr c(e);
    std::vector<double> p{0.2, -1.1, 0.5};
    CHECK(c(p.data()) == doctest::Approx(evalAt(e, p)).epsilon(1e-15));
}

TEST_CASE("polynomial canonical form and division") {
    auto a = toPolynomial(parse("(x1 + x2)^2 - x1^2 - 2*x1*x2"));
    REQUIRE(a);
    CHECK(*a == *toPolynomial(parse("x2^2")));
    CHECK_FALSE(toPolynomial(parse("exp(x1)")));
    auto g = *toPolynomial(parse("x1^2 + x2^2 - 1"));
    auto f = *toPolynomial(parse("x1^4 + x1^2*x2^2 + x2 - x1^2"));
    auto [q, r] = Polynomial::divmod(f, g);
    CHECK(q * g + r == f);
    CHECK(r == *toPolynomial(parse("x2")));
}
