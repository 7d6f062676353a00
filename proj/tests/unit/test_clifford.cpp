#include <doctest.h>

#include <random>

#include "superint/clifford.hpp"
#include "superint/errors.hpp"

using namespace superint;

namespace {

using MCE = MixedCliffordElement;

SuperFunction one(const SuperContext& c) { return SuperFunction(c, ScalarExpr(1)); }

// rewrite at a randomly chosen descent until the word is nondecreasing
std::map<SymWord, Rational> randomOrder(const SymWord& w, std::mt19937& rng) {
    std::vector<std::size_t> descents;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] > w[i + 1]) descents.push_back(i);
    if (descents.empty()) return {{w, Rational(1)}};
    std::size_t i = descents[rng() % descents.size()];
    SymWord s = w;
    std::swap(s[i], s[i + 1]);
    auto out = randomOrder(s, rng);
    int a = w[i], b = w[i + 1], g = 0;
    if (a % 2 == 0 && b == a - 1) g = -1;
    if (g) {
        SymWord t(w.begin(), w.begin() + i);
        t.insert(t.end(), w.begin() + i + 2, w.end());
        for (auto& [v, c] : randomOrder(t, rng)) out[v] += c * g;
    }
    std::map<SymWord, Rational> clean;
    for (auto& [v, c] : out)
        if (c != 0) clean.emplace(v, c);
    return clean;
}

MCE randomElement(const SuperContext& c, std::mt19937& rng) {
    MCE r(c);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int t = 0; t < 4; ++t) {
        Blade orth = rng() % (1u << c.m);
        SymWord w;
        int deg = rng() % 3;
        for (int i = 0; i < deg; ++i) w.push_back(static_cast<std::uint8_t>(1 + rng() % c.fermions()));
        SuperFunction f = SuperFunction(c, ScalarExpr(coef(rng)) + ScalarExpr(coef(rng)) * ScalarExpr::var(1));
        if (rng() % 2) f = f + SuperFunction::generator(c, 1) * SuperFunction::generator(c, 2);
        r = r + MCE::term(c, orth, w, f);
    }
    return r;
}

}  // namespace

TEST_CASE("generator relations") {
    SuperContext c(3, 1);
    CHECK(equivalent(MCE::e(c, 1) * MCE::e(c, 1), MCE::scalar(-one(c))));
    CHECK(equivalent(MCE::e(c, 1) * MCE::e(c, 2) + MCE::e(c, 2) * MCE::e(c, 1), MCE(c)));
    auto comm = MCE::eFer(c, 1) * MCE::eFer(c, 2) - MCE::eFer(c, 2) * MCE::eFer(c, 1);
    CHECK(equivalent(comm, MCE::scalar(one(c))));
    CHECK(equivalent(MCE::e(c, 2) * MCE::eFer(c, 1), -(MCE::eFer(c, 1) * MCE::e(c, 2))));
}

TEST_CASE("embedded supervector squares") {
    for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
        SuperContext c(m, n);
        auto x = embed(SuperVectorField::coordinate(c));
        auto sq = x * x;
        CHECK((sq.scalarPart() - superSquare(c)).isZero());
        CHECK(sq.terms().size() == 1);
        SuperVectorField ferOnly(c);
        ferOnly.fer = SuperVectorField::coordinate(c).fer;
        auto f = embed(ferOnly);
        CHECK(((f * f).scalarPart() - SuperFunction::fromGrassmann(c, fermionicSquare(n))).isZero());
    }
    SuperContext c(2, 1);
    CHECK(MCE::term(c, 0b11, {}, one(c)).scalarPart().isZero());
    CHECK((embed(SuperVectorField::coordinate(c)).component(0b1) - SuperFunction::coordinate(c, 1)).isZero());
}

TEST_CASE("random admissible vectors square to their vsquare") {
    std::mt19937 rng(2);
    SuperContext c(2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        SuperVectorField v(c);
        for (auto& b : v.bos)
            b = SuperFunction(c, ScalarExpr(static_cast<int>(rng() % 5) - 2) * ScalarExpr::var(1 + rng() % 2)) +
                SuperFunction::generator(c, 1 + rng() % 4) * SuperFunction::generator(c, 1 + rng() % 4);
        for (auto& f : v.fer) f = SuperFunction::generator(c, 1 + rng() % 4).scaled(ScalarExpr::var(1 + rng() % 2));
        auto sq = embed(v) * embed(v);
        CHECK((sq.scalarPart() - vsquare(v)).isZero());
        CHECK(sq.terms().size() <= 1);
    }
}

TEST_CASE("product is associative") {
    std::mt19937 rng(4);
    for (auto [m, n] : {std::pair{2, 1}, {3, 2}}) {
        SuperContext c(m, n);
        for (int trial = 0; trial < 6; ++trial) {
            auto a = randomElement(c, rng), b = randomElement(c, rng), d = randomElement(c, rng);
            CHECK(equivalent((a * b) * d, a * (b * d)));
        }
    }
}

TEST_CASE("normal ordering is confluent") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        SymWord w;
        int len = 2 + rng() % 5;
        for (int i = 0; i < len; ++i) w.push_back(static_cast<std::uint8_t>(1 + rng() % 4));
        auto want = normalOrder(w);
        for (int rep = 0; rep < 3; ++rep) CHECK(randomOrder(w, rng) == want);
    }
    CHECK_THROWS_AS(normalOrder(SymWord(17, 1)), UnsupportedError);
}

TEST_CASE("Dirac operator") {
    for (auto [m, n] : {std::pair{1, 0}, {3, 1}, {2, 2}, {4, 1}}) {
        SuperContext c(m, n);
        auto x = embed(SuperVectorField::coordinate(c));
        auto M = MCE::scalar(SuperFunction(c, ScalarExpr(c.M())));
        CHECK(equivalent(diracApply(x, Side::Left), M));
        CHECK(equivalent(diracApply(x, Side::Right), M));
        auto g = superSquare(c) + SuperFunction(c, ScalarExpr(4));
        CHECK(equivalent(diracApply(g, Side::Left), embed(SuperVectorField::coordinate(c).scaled(SuperFunction(c, ScalarExpr(2))))));
        CHECK(equivalent(diracApply(diracApply(superSquare(c), Side::Left), Side::Left), MCE::scalar(superLaplace(superSquare(c)))));
    }
    std::mt19937 rng(6);
    SuperContext c(2, 1);
    for (int trial = 0; trial < 5; ++trial) {
        auto g = SuperFunction(c, ScalarExpr(static_cast<int>(rng() % 5)) * parse("x1^2*x2") + parse("x2^3")) +
                 SuperFunction::generator(c, 1) * SuperFunction::generator(c, 2).scaled(parse("x1 - 2*x2^2"));
        CHECK(equivalent(diracApply(g, Side::Left), embed(superGradient(g))));
    }
}
