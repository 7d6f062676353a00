#include <doctest.h>

#include <random>

#include "superint/distrib.hpp"
#include "superint/errors.hpp"

using namespace superint;

namespace {

SuperFunction lit(const char* s, const SuperContext& c) { return parseSuperFunction(s, c); }

SuperFunction randomEvenPoly(const SuperContext& c, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    auto randomPoly = [&](int deg) {
        ScalarExpr e(coef(rng));
        for (int j = 1; j <= c.m; ++j)
            for (int k = 1; k <= deg; ++k)
                if (rng() % 2) e = e + ScalarExpr(coef(rng)) * pow(ScalarExpr::var(j), Coeff(k));
        return e;
    };
    ScalarExpr body = randomPoly(2) + ScalarExpr::var(1) * ScalarExpr::var(1);
    SuperFunction g(c, body);
    for (Blade b = 1; b <= c.topBlade(); ++b)
        if (bladeGrade(b) % 2 == 0 && rng() % 2) g = g + SuperFunction::monomial(c, b, randomPoly(1));
    return g;
}

}  // namespace

TEST_CASE("delta expansion of the supersphere phase") {
    SuperContext c(3, 1);
    auto d = expandDelta(lit("X2 + 4", c), 0);
    CHECK(d.deltaTerms.size() == 2);
    CHECK(d.deltaTerms.at(0).str() == "1");
    CHECK((d.deltaTerms.at(1) - lit("q1*q2", c)).isZero());
    CHECK_FALSE(d.heaviside);

    auto plain = expandDelta(lit("x1^2 - x2", c), 3);
    CHECK(plain.deltaTerms.size() == 1);
    CHECK(plain.deltaTerms.count(3) == 1);

    SuperContext c2(2, 2);
    auto t = expandDelta(lit("x1 + q1*q2", c2), 0);
    CHECK(t.deltaTerms.size() == 2);
    CHECK_THROWS_AS(expandDelta(lit("q1", c2), 0), ParityError);
    CHECK_THROWS_AS(expandDelta(lit("3 + q1*q2", c2), 0), DomainError);
}

TEST_CASE("Heaviside expansion") {
    SuperContext c(3, 1);
    auto h = expandHeaviside(lit("X2 + 1", c), 1);
    REQUIRE(h.heaviside);
    CHECK(h.deltaTerms.size() == 1);
    CHECK((h.deltaTerms.at(0) - lit("q1*q2", c)).isZero());
    SuperContext c0(2, 0);
    auto pure = expandHeaviside(lit("x1^2 + x2^2 - 1", c0), -1);
    CHECK(pure.deltaTerms.empty());
    // Berezin of H(x^2 + R^2): the top-blade coefficient sits on delta^(n-1)
    for (int n = 1; n <= 3; ++n) {
        SuperContext cn(3, n);
        auto e = expandHeaviside(superSquare(cn) + SuperFunction(cn, ScalarExpr(1)), 1);
        for (auto& [j, coef] : e.deltaTerms) {
            auto top = coef.component(cn.topBlade());
            if (j == n - 1)
                CHECK(top.isOne());
            else
                CHECK(top.isZero());
        }
    }
}

TEST_CASE("products with the phase lower the order") {
    SuperContext c(2, 1);
    auto g = lit("x1^2 + x2^2 - 1 + x1*q1*q2", c);
    CHECK(multiplySF(expandDelta(g, 0), g).deltaTerms.empty());
    auto lowered = multiplySF(expandDelta(g, 1), g);
    auto want = expandDelta(g, 0);
    CHECK(equivalent(lowered, scaleExpansion(want, ScalarExpr(-1))));
    auto same = multiplySF(expandDelta(g, 2), SuperFunction(c, ScalarExpr(1)));
    CHECK(equivalent(same, expandDelta(g, 2)));
}

TEST_CASE("delta times powers of its phase, randomized") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        SuperContext c(2, 1 + trial % 2);
        auto g = randomEvenPoly(c, rng);
        for (int j = 0; j <= 3; ++j) {
            auto gj = pow(g, static_cast<unsigned>(j));
            long long fact = 1;
            for (int k = 2; k <= j; ++k) fact *= k;
            auto lhs = multiplySF(expandDelta(g, j), gj);
            auto rhs = scaleExpansion(expandDelta(g, 0), ScalarExpr(Coeff(j % 2 ? -fact : fact)));
            CHECK(equivalent(lhs, rhs));
            CHECK(multiplySF(expandDelta(g, j), gj * g).deltaTerms.empty());
        }
    }
}

TEST_CASE("negating the phase") {
    SuperContext c(2, 1);
    auto g = lit("x1^2 - x2 + q1*q2", c);
    auto d0 = expandDelta(-g, 0), d1 = expandDelta(-g, 1);
    CHECK(equivalent(negatePhase(d0), expandDelta(g, 0)));
    CHECK(equivalent(negatePhase(d1), scaleExpansion(expandDelta(g, 1), ScalarExpr(-1))));
    auto h = expandHeaviside(g, 1);
    auto twice = negatePhase(negatePhase(h));
    CHECK(equivalent(twice, h));
    CHECK(twice.phaseSign == 1);
    CHECK(negatePhase(h).phaseSign == -1);
}

TEST_CASE("scale cancellation") {
    SuperContext c(2, 1);
    auto g = lit("x1^2 + x2^2 - 1 + q1*q2", c);
    auto h = lit("2 + x1^2 + x2*q1*q2", c);
    std::vector<std::vector<double>> pts{{1, 0}, {0, 1}, {-0.6, 0.8}};
    auto d = scaleCancel(g, h, DistKind::Delta, 0, pts);
    CHECK(equivalent(d, multiplySF(expandDelta(g, 0), inverse(h))));
    auto hd = scaleCancel(g, h, DistKind::Heaviside, -1, pts);
    CHECK(equivalent(hd, expandHeaviside(g, -1)));
    auto one = scaleCancel(g, lit("1", c), DistKind::Delta, 0);
    CHECK(equivalent(one, expandDelta(g, 0)));
    CHECK_THROWS_AS(scaleCancel(g, lit("x1", c), DistKind::Delta, 0, pts), RefusalError);
    CHECK_THROWS_AS(scaleCancel(g, h, DistKind::Delta, 0), RefusalError);
    auto konst = scaleCancel(g, lit("4", c), DistKind::Delta, 1);
    CHECK(equivalent(konst, scaleExpansion(expandDelta(g, 1), ScalarExpr(Coeff::ratio(1, 16)))));
}

TEST_CASE("differentiating expansions") {
    SuperContext c(2, 1);
    auto g0 = lit("x1^2 + x2", c);
    auto d = expandDelta(g0, 2);
    auto dd = diffExpansion(d, Direction::bos(1));
    CHECK(dd.deltaTerms.size() == 1);
    CHECK((dd.deltaTerms.at(3) - lit("2*x1", c)).isZero());
    auto konst = expandDelta(lit("x1 - x2", c), 0);
    CHECK(diffExpansion(konst, Direction::fer(1)).deltaTerms.empty());
}

TEST_CASE("gradient of H(-g) equals -grad(g) delta(g)") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        SuperContext c(2, 1 + trial % 2);
        auto g = randomEvenPoly(c, rng);
        auto lhs = superGradientExpansion(expandHeaviside(g, -1));
        REQUIRE(lhs.heaviside.has_value() == false);
        auto rhs = (-embed(superGradient(g))) * expandDelta(g, 0);
        CHECK(equivalent(lhs, rhs));
    }
}
