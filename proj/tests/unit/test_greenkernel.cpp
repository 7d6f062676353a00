#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "superint/errors.hpp"
#include "superint/greenkernel.hpp"
#include "superint/quadrature.hpp"

using namespace superint;

namespace {

SuperFunction lit(const char* s, const SuperContext& c) { return parseSuperFunction(s, c); }

// kernel as (scalar, vector) at a point
std::pair<double, std::vector<double>> kernelAt(const RadialKernel& k, const std::vector<double>& x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    const double f = k.radial(std::sqrt(r2));
    if (!k.vector) return {f, std::vector<double>(x.size(), 0.0)};
    std::vector<double> v(x);
    for (double& c : v) c *= f;
    return {0.0, v};
}

// d_x_ K = sum e_j d_j K with e_j^2 = -1: scalar part -div v, vector part grad s
std::pair<double, std::vector<double>> diracFD(const RadialKernel& k, const std::vector<double>& x) {
    const double h = 1e-3;
    const std::size_t m = x.size();
    double s = 0;
    std::vector<double> v(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        auto at = [&](double d) {
            auto y = x;
            y[j] += d;
            return kernelAt(k, y);
        };
        const auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
        auto d5 = [&](double a1, double b1, double a2, double b2) { return (8 * (a1 - b1) - (a2 - b2)) / (12 * h); };
        v[j] = d5(p1.first, m1.first, p2.first, m2.first);
        s -= d5(p1.second[j], m1.second[j], p2.second[j], m2.second[j]);
    }
    return {s, v};
}

}  // namespace

TEST_CASE("phi recursion and unit flux") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int m = 2; m <= 4; ++m) {
        const auto phi = phiFamily(m, 5);
        REQUIRE(phi.size() == 5);
        for (int j = 0; j + 1 < 5; ++j)
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<double> x(m);
                for (double& c : x) c = u(rng);
                const auto lhs = diracFD(phi[j + 1], x);
                const auto rhs = kernelAt(phi[j], x);
                double scale = std::abs(rhs.first), diff = std::abs(lhs.first - rhs.first);
                for (int i = 0; i < m; ++i) {
                    scale = std::max(scale, std::abs(rhs.second[i]));
                    diff = std::max(diff, std::abs(lhs.second[i] - rhs.second[i]));
                }
                CAPTURE(m);
                CAPTURE(j);
                CHECK(diff <= 1e-8 * (1 + scale));
            }
        // int_B d_x_ phi_1 = sum over the unit sphere of n_ phi_1, scalar part -n.v
        const SphereRule& rule = sphereRule(m, 4);
        double flux = 0;
        for (std::size_t q = 0; q < rule.w.size(); ++q) {
            const auto k = kernelAt(phi[0], rule.dirs[q]);
            for (int i = 0; i < m; ++i) flux -= rule.w[q] * rule.dirs[q][i] * k.second[i];
        }
        CHECK(std::abs(flux - 1) <= 1e-8);
    }
    CHECK(phiFamily(2, 2)[1].logFlag);
    CHECK_THROWS_AS(phiFamily(5, 2), UnsupportedError);
    CHECK_THROWS_AS(phiFamily(3, 6), UnsupportedError);
}

TEST_CASE("nu1 assembly") {
    const auto k0 = nu1(3, 0);
    REQUIRE(k0.terms.size() == 1);
    CHECK(k0.terms[0].factor == -1);
    CHECK(k0.terms[0].xferPower == 0);
    CHECK(k0.terms[0].phi.vector);
    const auto k1 = nu1(3, 1);
    REQUIRE(k1.terms.size() == 3);
    CHECK(k1.terms[0].factor == doctest::Approx(2 * std::numbers::pi));
    CHECK(k1.terms[0].xferPower == 1);
    CHECK(k1.terms[1].xferPower == 2);
    CHECK(k1.terms[2].xferPower == 0);
    CHECK(nu1(2, 2).terms.size() == 5);
}

TEST_CASE("super Dirac delta pairing") {
    const auto d = superDiracDelta(3, 1);
    SuperContext c(3, 1);
    CHECK(d.pair(lit("1", c), {0, 0, 0}) == doctest::Approx(1));
    CHECK(d.pair(lit("x1 + 5*q1*q2", c), {0.3, 0.2, 0.1}) == doctest::Approx(0.3));
    // (pi^n/n!) int_B (x` - y`)^2n x`_A = y`_A with y` carried by q3, q4 and the Berezin integral over q1, q2
    SuperContext c2(1, 2);
    const auto xy = (lit("q1", c2) - lit("q3", c2)) * (lit("q2", c2) - lit("q4", c2));
    const auto p = xy * lit("q1", c2);
    // coefficient of q1 q2 q3 is the q3 (= y`_1) part of the partial integral
    CHECK(evalAt(p.component(0b0111), std::vector<double>{0}) == doctest::Approx(1));
    CHECK(p.component(0b1011).isZero());
}

TEST_CASE("Stokes identity") {
    SuperContext c0(2, 0);
    IntegrateOptions opt;
    opt.box = Box::cube(2, 1.5);
    opt.backend = Backend::Grid;
    const auto one = MixedCliffordElement::scalar(lit("1", c0));
    CHECK(stokesCheck(one, one, lit("-X2 - 1", c0), opt).deviation <= 1e-12);
    const auto G = MixedCliffordElement::scalar(lit("x1^3 - 2*x1*x2 + x2^2 + 4", c0));
    CHECK(stokesCheck(one, G, lit("-X2 - 1", c0), opt).deviation <= 1e-6);

    SuperContext c(2, 1);
    const auto s = stokesCheck(MixedCliffordElement::scalar(lit("1", c)), MixedCliffordElement::scalar(lit("x1", c)),
                               lit("-X2 - 1", c), opt);
    CHECK(s.deviation <= 1e-4);
    CHECK(s.lhs.component({1, {}}) != 0);
    const auto F = MixedCliffordElement::scalar(lit("x1^2*x2 + q1*q2", c)) * MixedCliffordElement::e(c, 1);
    const auto G2 = MixedCliffordElement::scalar(lit("x1*x2^2 + q2*x2 + 1", c)) * MixedCliffordElement::eFer(c, 1);
    CHECK(stokesCheck(F, G2, lit("-X2 - 1", c), opt).deviation <= 1e-4);
}

TEST_CASE("Cauchy-Pompeiu") {
    IntegrateOptions opt;
    SuperContext c0(2, 0);
    opt.box = Box::cube(2, 1.5);
    const auto r0 = cauchyPompeiu(lit("x1 + x2^2", c0), lit("x1^2 + x2^2 - 1", c0), {0.2, 0.1}, opt);
    CHECK(r0.interior);
    CHECK(std::abs(r0.value.component({0, {}}) - 0.21) <= 1e-3);

    SuperContext c(3, 1);
    opt.box = Box::cube(3, 1.5);
    const auto g = lit("-X2 - 1", c);
    const auto G = lit("x1^3 - 2*x2*x3 + q1*q2*x3^2 + 0.5", c);
    const auto out = cauchyPompeiu(G, g, {1.3, 0.9, -0.6}, opt);
    CHECK_FALSE(out.interior);
    CHECK(out.deviation <= 1e-3);
    const auto in = cauchyPompeiu(lit("1", c), g, {0, 0, 0}, opt);
    CHECK(std::abs(in.value.component({0, {}}) - 1) <= 1e-3);
    const auto off = cauchyPompeiu(G, g, {0.5, -0.3, 0.2}, opt);
    CHECK(off.expected == doctest::Approx(0.745));
    CHECK(off.deviation <= 1e-3);
    CHECK_THROWS_AS(cauchyPompeiu(G, g, {1, 0, 0}, opt), RefusalError);
}

TEST_CASE("weak Dirac derivative of nu1") {
    // psi = (1 - r^2)^2 vanishes on the unit sphere: int_B nu1 (d_x psi) = -psi(0)
    for (int m = 2; m <= 3; ++m) {
        SuperContext c(m, 0);
        const auto g = m == 2 ? lit("x1^2 + x2^2 - 1", c) : lit("x1^2 + x2^2 + x3^2 - 1", c);
        const auto psi = g * g;
        const auto K = nu1(m, 0).element(std::vector<double>(m, 0.0)) * diracApply(psi, Side::Left);
        IntegrateOptions opt;
        opt.box = Box::cube(m, 1.5);
        const auto tasks = berezinReduce(expandHeaviside(g, -1) * K, {}, *opt.box);
        const double v = tasks.count({0, {}}) ? evaluateAll(tasks.at({0, {}}), opt).value : 0.0;
        CHECK(std::abs(v + 1) <= 1e-3);
    }
}
