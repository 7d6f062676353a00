#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "superint/errors.hpp"
#include "superint/special.hpp"

using namespace superint;

namespace {

constexpr double kPi = std::numbers::pi;

double quad(auto f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1 + std::abs(b)); }

}  // namespace

TEST_CASE("Gamma and Pochhammer") {
    const double sp = std::sqrt(kPi);
    CHECK(close(gammaFn(0.5), sp, 1e-15));
    CHECK(close(gammaFn(2.5), 0.75 * sp, 1e-15));
    CHECK(close(gammaFn(-0.5), -2 * sp, 1e-15));
    CHECK(gammaFn(5) == doctest::Approx(24));
    CHECK_THROWS_AS(gammaFn(0), PoleError);
    CHECK_THROWS_AS(gammaFn(-3), PoleError);
    CHECK(isGammaPole(-2));
    CHECK_FALSE(isGammaPole(-2.5));
    CHECK(pochhammer(7.3, 0) == 1);
    CHECK(pochhammer(3, 4) == 360);
    CHECK(pochhammer(-2, 3) == 0);
}

TEST_CASE("Gauss hypergeometric values") {
    CHECK(gauss2F1(0.3, 1.7, 2.2, 0) == 1);
    for (double h : {0.5, 1.0, 2.0}) CHECK(close(gauss2F1(-1, 0.5, 1.5, -h * h), 1 + h * h / 3, 1e-14));
    CHECK(close(gauss2F1(-0.5, 0.5, 1.5, -4), (std::sqrt(5.0) + std::asinh(2.0) / 2) / 2, 1e-12));
    // log(1+z)/z = 2F1(1,1;2;-z)
    CHECK(close(gauss2F1(1, 1, 2, -0.9), std::log(1.9) / 0.9, 1e-13));
    CHECK(close(gauss2F1(1, 1, 2, 0.8), -std::log(0.2) / 0.8, 1e-12));
    CHECK_THROWS_AS(gauss2F1(1, 1, -2, 0.1), ParameterError);
    CHECK_THROWS_AS(gauss2F1(1, 1, 2, 1.0), ParameterError);
}

TEST_CASE("2F1 series against the Euler integral on catalog parameters") {
    for (int M = 2; M <= 9; ++M)
        for (double z = -8; z <= 0; z += 0.5) {
            const double b = (M - 1) / 2.0;
            CHECK(close(gauss2F1(-0.5, b, b + 1, z), gauss2F1Euler(-0.5, b, b + 1, z), 1e-9));
        }
    for (int M = -5; M <= 9; ++M)
        for (double z = -8; z <= 0; z += 0.5)
            CHECK(close(gauss2F1((1 - M) / 2.0, 0.5, 1.5, z), gauss2F1Euler((1 - M) / 2.0, 0.5, 1.5, z), 1e-9));
}

TEST_CASE("Appell F1") {
    CHECK(appellF1(0.4, 1.1, -0.3, 2.5, 0, 0) == 1);
    CHECK(close(appellF1(0.4, 1.1, 0, 2.5, -0.3, -0.7), gauss2F1(0.4, 1.1, 2.5, -0.3), 1e-14));
    CHECK(close(appellF1(0.4, 1.1, 0, 2.5, -3, -0.7), gauss2F1(0.4, 1.1, 2.5, -3), 1e-12));
    const double want = (2 * std::sqrt(3.0) + std::sqrt(2.0) * std::asinh(std::sqrt(2.0))) / 4;
    CHECK(close(appellF1(0.5, -0.5, 0, 1.5, -2, -1), want, 1e-12));
    for (int M = -5; M <= 9; ++M)
        for (double h : {0.25, 0.5, 1.0, 1.5, 2.0}) {
            const double b2 = (3 - M) / 2.0, z1 = -2 * h * h, z2 = -h * h;
            CHECK(close(appellF1(0.5, -0.5, b2, 1.5, z1, z2), appellF1Integral(0.5, -0.5, b2, 1.5, z1, z2), 1e-8));
        }
}

TEST_CASE("catalog classical values") {
    auto val = [](Shape s, Kind k, int m, int n, double p) { return catalog(s, k, m, n, p).value; };
    CHECK(close(val(Shape::Superball, Kind::Volume, 3, 1, 2), 4, 1e-14));
    CHECK(close(val(Shape::Supersphere, Kind::Area, 4, 1, 1), 2 * kPi, 1e-14));
    CHECK(close(val(Shape::Superball, Kind::Volume, 3, 0, 1), 4 * kPi / 3, 1e-14));
    CHECK(close(val(Shape::Paraboloid, Kind::Volume, 2, 0, 1), 4.0 / 3, 1e-14));
    CHECK(close(val(Shape::Paraboloid, Kind::Volume, 3, 0, 1), kPi / 2, 1e-14));
    CHECK(close(val(Shape::Paraboloid, Kind::Area, 2, 0, 1), std::sqrt(5.0) + std::asinh(2.0) / 2, 1e-12));
    CHECK(close(val(Shape::Paraboloid, Kind::Area, 3, 0, 1), kPi / 6 * (std::pow(5, 1.5) - 1), 1e-12));
    CHECK(close(val(Shape::Hyperboloid, Kind::Volume, 2, 0, 1), 2 * (std::sqrt(2.0) + std::asinh(1.0)), 1e-12));
    CHECK(close(val(Shape::Hyperboloid, Kind::Volume, 3, 0, 1), 8 * kPi / 3, 1e-14));
    CHECK(close(val(Shape::Hyperboloid, Kind::Area, 3, 0, 1),
                kPi * (2 * std::sqrt(3.0) + std::sqrt(2.0) * std::asinh(std::sqrt(2.0))), 1e-12));
    CHECK(catalog(Shape::Hyperboloid, Kind::Area, 2, 0, 1).formula == "hyperboloid-area");
}

TEST_CASE("catalog zero branches and ranges") {
    CHECK(catalog(Shape::Superball, Kind::Volume, 2, 2, 1).value == 0);
    CHECK(catalog(Shape::Superball, Kind::Volume, 4, 3, 1.5).value == 0);
    CHECK(catalog(Shape::Supersphere, Kind::Area, 2, 1, 1).value == 0);
    CHECK(catalog(Shape::Supersphere, Kind::Area, 4, 3, 1).value == 0);
    CHECK(catalog(Shape::Hyperboloid, Kind::Area, 3, 1, 1).value == 0);
    CHECK(catalog(Shape::Hyperboloid, Kind::Area, 1, 1, 1).value == 0);
    CHECK(catalog(Shape::Hyperboloid, Kind::Volume, 1, 1, 1).value == 0);
    CHECK(catalog(Shape::Paraboloid, Kind::Volume, 3, 2, 1).value == 0);
    // M <= 1 through 2F1 / Gamma(c); M = 0 value from mpmath hyp2f1(-1/2, -1/2, 1/2, -4) / pi
    CHECK(close(catalog(Shape::Paraboloid, Kind::Area, 3, 1, 0.6).value, 1, 1e-14));
    CHECK(close(catalog(Shape::Paraboloid, Kind::Area, 4, 2, 1).value, -0.207284344172922, 1e-12));
    CHECK(close(catalog(Shape::Paraboloid, Kind::Area, 5, 3, 1).value, -2 / kPi, 1e-12));
    CHECK_THROWS_AS(catalog(Shape::Paraboloid, Kind::Volume, 3, 1, 0), ParameterError);
    CHECK_THROWS_AS(parseShape("torus"), ParameterError);
}

TEST_CASE("catalog super cases against their one-dimensional integrals") {
    for (int m = 2; m <= 7; ++m)
        for (int n = 0; n <= 2; ++n) {
            const double M = m - 2 * n;
            const double h = 0.75;
            if (M > 1) {
                // area(SP) = pi^((M-1)/2)/Gamma((M-1)/2) int_0^h (4x+1)^(1/2) x^((M-3)/2) dx, with x = u^2
                const double oracle =
                    std::pow(kPi, (M - 1) / 2) / gammaFn((M - 1) / 2) *
                    quad([&](double u) { return 2 * std::sqrt(4 * u * u + 1) * std::pow(u, M - 2); }, 0, std::sqrt(h));
                CHECK(close(catalog(Shape::Paraboloid, Kind::Area, m, n, h).value, oracle, 1e-9));
            }
            if (!isGammaPole((M + 1) / 2)) {
                const double oracle = 2 * std::pow(kPi, (M - 1) / 2) / gammaFn((M + 1) / 2) *
                                      quad([&](double x) { return std::pow(x * x + 1, (M - 1) / 2); }, 0, h);
                CHECK(close(catalog(Shape::Hyperboloid, Kind::Volume, m, n, h).value, oracle, 1e-10));
            }
            if (!isGammaPole((M - 1) / 2)) {
                const double oracle = 4 * std::pow(kPi, (M - 1) / 2) / gammaFn((M - 1) / 2) *
                                      quad([&](double x) { return std::sqrt(2 * x * x + 1) * std::pow(x * x + 1, (M - 3) / 2); }, 0, h);
                CHECK(close(catalog(Shape::Hyperboloid, Kind::Area, m, n, h).value, oracle, 1e-10));
            }
        }
}

TEST_CASE("Pizzetti values") {
    SuperContext c3(3, 0);
    CHECK(close(pizzetti(parseSuperFunction("1", c3)), 4 * kPi, 1e-14));
    CHECK(close(pizzetti(parseSuperFunction("x1^2", c3)), 4 * kPi / 3, 1e-14));
    CHECK(std::abs(pizzetti(parseSuperFunction("x1*x2", c3))) < 1e-15);
    SuperContext c31(3, 1);
    CHECK(close(pizzetti(parseSuperFunction("1", c31)), 2, 1e-14));
    CHECK(close(pizzetti(parseSuperFunction("q1*q2", c31)), 2 * std::pow(kPi, 0.5) / gammaFn(1.5), 1e-14));
    // classical fourth moment over S^2: 4 pi / 5
    CHECK(close(pizzetti(parseSuperFunction("x3^4", c3)), 4 * kPi / 5, 1e-13));
    SuperContext c21(2, 1);
    CHECK(pizzetti(parseSuperFunction("1", c21)) == 0);
}
