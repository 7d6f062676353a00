#include <doctest.h>

#include <cmath>
#include <random>

#include "superint/errors.hpp"
#include "superint/grassmann.hpp"

using namespace superint;

namespace {

GrassmannElement randomElement(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    GrassmannElement a(n);
    for (Blade b = 0; b < (Blade(1) << (2 * n)); ++b)
        if (rng() % 3 == 0) a = a + GrassmannElement::monomial(n, b, Coeff(coef(rng)));
    return a;
}

}  // namespace

TEST_CASE("generators anticommute and square to zero") {
    auto e1 = GrassmannElement::generator(1, 1), e2 = GrassmannElement::generator(1, 2);
    auto p = gproduct(e1, e2);
    CHECK(p.terms().size() == 1);
    CHECK(p.coeff(0b11).approxEqual(Coeff(1)));
    CHECK((gproduct(e2, e1) + p).isZero());
    CHECK(gproduct(p, e1).isZero());
    CHECK(gproduct(e1, e1).isZero());
}

TEST_CASE("fermionic square power gives n! times the top blade") {
    for (int n = 1; n <= 3; ++n) {
        auto s = power(fermionicSquare(n), n);
        long long fact = 1;
        for (int k = 2; k <= n; ++k) fact *= k;
        CHECK(s.terms().size() == 1);
        CHECK(s.coeff((Blade(1) << (2 * n)) - 1).approxEqual(Coeff(fact)));
    }
    auto q = GrassmannElement::generator(2, 1) * GrassmannElement::generator(2, 2) +
             GrassmannElement::generator(2, 3) * GrassmannElement::generator(2, 4);
    CHECK((q * q).coeff(0b1111).approxEqual(Coeff(2)));
}

TEST_CASE("product is associative and bilinear") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + trial % 4;
        auto a = randomElement(n, rng), b = randomElement(n, rng), c = randomElement(n, rng);
        CHECK(((a * b) * c - a * (b * c)).isZero());
        CHECK((a * (b + c) - (a * b + a * c)).isZero());
    }
}

TEST_CASE("mismatched contexts are rejected") {
    CHECK_THROWS_AS(gproduct(GrassmannElement(1), GrassmannElement(2)), ContextError);
    CHECK_THROWS_AS(SuperContext(0, 1), ContextError);
}

TEST_CASE("body and nilpotent split") {
    auto a = GrassmannElement::scalar(1, Coeff(3)) + GrassmannElement::monomial(1, 0b11, Coeff(2));
    auto [body, nil] = bodyNil(a);
    CHECK(body.approxEqual(Coeff(3)));
    CHECK(nil.coeff(0).isZero());
    CHECK(nil.coeff(0b11).approxEqual(Coeff(2)));
    auto [z, zn] = bodyNil(GrassmannElement(1));
    CHECK(z.isZero());
    CHECK(zn.isZero());
    auto top = GrassmannElement::monomial(2, 0b1111, Coeff(1));
    CHECK(bodyNil(top).first.isZero());
}

TEST_CASE("berezin integral") {
    CHECK(berezin(GrassmannElement::monomial(1, 0b11, Coeff(1))) == doctest::Approx(1 / M_PI).epsilon(1e-15));
    CHECK(berezin(GrassmannElement::scalar(1, Coeff(1))) == 0.0);
    auto a = GrassmannElement::scalar(1, Coeff(5)) + GrassmannElement::monomial(1, 0b11, Coeff(3));
    CHECK(berezin(a) == doctest::Approx(3 / M_PI).epsilon(1e-15));
    CHECK(berezin(GrassmannElement::scalar(0, Coeff(4))) == 4.0);
}

TEST_CASE("star sign") {
    CHECK(starSign(0) == 1);
    CHECK(starSign(0b1) == -1);
    CHECK(starSign(0b11) == 1);
}

TEST_CASE("exact rationals fall back to doubles") {
    Coeff a = Coeff::ratio(1, 3);
    CHECK(a.exact());
    CHECK((a * Coeff(3)).isOne());
    Coeff b = a * Coeff(0.5);
    CHECK_FALSE(b.exact());
    CHECK(b.approxEqual(Coeff(1.0 / 6)));
}
