#include "superint/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "superint/errors.hpp"

namespace superint {

namespace {

constexpr double kSeriesRelTol = 1e-16;
constexpr long kSeriesCap = 1000000;
constexpr double kPi = std::numbers::pi;

bool isNonPositiveInteger(double x) { return x <= 0 && x == std::floor(x); }

// 1 - t evaluated from the tanh-sinh complement without cancellation
double oneMinus(double t, double tc) { return tc > 0 ? tc : 1.0 - t; }

double integrate01(const auto& f) {
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0;
    const double v = ts.integrate(f, 0.0, 1.0, 1e-15, &err);
    if (!std::isfinite(v)) throw QuadratureError("Euler integral did not converge");
    return v;
}

}  // namespace

bool isGammaPole(double x) { return isNonPositiveInteger(x); }

double gammaFn(double x) {
    if (isGammaPole(x)) throw PoleError("Gamma has a pole at " + std::to_string(x));
    return boost::math::tgamma(x);
}

double pochhammer(double q, int j) {
    if (j < 0) throw ParameterError("negative Pochhammer index");
    double r = 1;
    for (int i = 0; i < j; ++i) r *= q + i;
    return r;
}

double sphereArea(double m) { return 2 * std::pow(kPi, m / 2) / gammaFn(m / 2); }

double gauss2F1Series(double a, double b, double c, double z) {
    if (isNonPositiveInteger(c)) throw ParameterError("2F1 with c a nonpositive integer");
    double sum = 1, term = 1;
    int small = 0;
    for (long k = 0; k < kSeriesCap; ++k) {
        if (a + k == 0 || b + k == 0) return sum;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        sum += term;
        if (std::abs(term) <= kSeriesRelTol * std::abs(sum)) {
            if (++small >= 2) return sum;
        } else {
            small = 0;
        }
    }
    throw DivergenceError("2F1 series did not converge");
}

double gauss2F1Euler(double a, double b, double c, double z) {
    if (!(c > b && b > 0)) throw ParameterError("Euler integral needs c > b > 0");
    if (z >= 1) throw ParameterError("Euler integral needs z < 1");
    const double norm = 1 / boost::math::beta(b, c - b);
    return norm * integrate01([&](double t, double tc) {
               return std::pow(t, b - 1) * std::pow(oneMinus(t, tc), c - b - 1) * std::pow(1 - z * t, -a);
           });
}

double gauss2F1(double a, double b, double c, double z) {
    if (isNonPositiveInteger(c)) throw ParameterError("2F1 with c a nonpositive integer");
    if (z >= 1) throw ParameterError("2F1 needs z < 1");
    if (z == 0) return 1;
    if (isNonPositiveInteger(a) || isNonPositiveInteger(b) || std::abs(z) < 0.5) return gauss2F1Series(a, b, c, z);
    if (z < 0) {
        // Pfaff: the argument z/(z-1) lies in (1/3, 1)
        const double w = z / (z - 1);
        if (isNonPositiveInteger(c - a)) return std::pow(1 - z, -b) * gauss2F1Series(c - a, b, c, w);
        return std::pow(1 - z, -a) * gauss2F1Series(a, c - b, c, w);
    }
    if (c > b && b > 0) return gauss2F1Euler(a, b, c, z);
    if (c > a && a > 0) return gauss2F1Euler(b, a, c, z);
    return gauss2F1Series(a, b, c, z);
}

namespace {

// sum_j (a)_j (b1)_j / ((c)_j j!) x^j 2F1(a+j, b2; c+j; y) for |x|, |y| < 1
double appellNested(double a, double b1, double b2, double c, double x, double y) {
    double sum = 0, outer = 1;
    int small = 0;
    for (long j = 0; j < kSeriesCap; ++j) {
        const double t = outer * (y == 0 || b2 == 0 ? 1.0 : gauss2F1Series(a + j, b2, c + j, y));
        sum += t;
        if (a + j == 0 || b1 + j == 0 || x == 0) return sum;
        if (std::abs(t) <= kSeriesRelTol * std::abs(sum)) {
            if (++small >= 2) return sum;
        } else {
            small = 0;
        }
        outer *= (a + j) * (b1 + j) / ((c + j) * (j + 1)) * x;
    }
    throw DivergenceError("F1 series did not converge");
}

}  // namespace

double appellF1(double a, double b1, double b2, double c, double z1, double z2) {
    if (isNonPositiveInteger(c)) throw ParameterError("F1 with c a nonpositive integer");
    if (z1 >= 1 || z2 >= 1) throw ParameterError("F1 needs z1, z2 < 1");
    if (std::abs(z1) < 0.5 && std::abs(z2) < 0.5) return appellNested(a, b1, b2, c, z1, z2);
    // (1-z1)^-b1 (1-z2)^-b2 F1(c-a; b1, b2; c; z1/(z1-1), z2/(z2-1))
    const double w1 = z1 / (z1 - 1), w2 = z2 / (z2 - 1);
    if (std::abs(w1) >= 1 || std::abs(w2) >= 1) throw ParameterError("F1 arguments outside the supported region");
    return std::pow(1 - z1, -b1) * std::pow(1 - z2, -b2) * appellNested(c - a, b1, b2, c, w1, w2);
}

double appellF1Integral(double a, double b1, double b2, double c, double z1, double z2) {
    if (!(c > a && a > 0)) throw ParameterError("F1 integral needs c > a > 0");
    if (z1 >= 1 || z2 >= 1) throw ParameterError("F1 integral needs z1, z2 < 1");
    const double norm = 1 / boost::math::beta(a, c - a);
    return norm * integrate01([&](double t, double tc) {
               return std::pow(t, a - 1) * std::pow(oneMinus(t, tc), c - a - 1) * std::pow(1 - z1 * t, -b1) *
                      std::pow(1 - z2 * t, -b2);
           });
}

Shape parseShape(std::string_view s) {
    if (s == "superball" || s == "ball") return Shape::Superball;
    if (s == "supersphere" || s == "sphere") return Shape::Supersphere;
    if (s == "paraboloid") return Shape::Paraboloid;
    if (s == "hyperboloid") return Shape::Hyperboloid;
    throw ParameterError("unknown shape '" + std::string(s) + "'");
}

Kind parseKind(std::string_view s) {
    if (s == "volume") return Kind::Volume;
    if (s == "area") return Kind::Area;
    throw ParameterError("unknown kind '" + std::string(s) + "'");
}

std::string shapeName(Shape s) {
    switch (s) {
        case Shape::Superball: return "superball";
        case Shape::Supersphere: return "supersphere";
        case Shape::Paraboloid: return "paraboloid";
        case Shape::Hyperboloid: return "hyperboloid";
    }
    return "?";
}

std::string kindName(Kind k) { return k == Kind::Volume ? "volume" : "area"; }

ClosedFormValue catalog(Shape shape, Kind kind, int m, int n, double param) {
    SuperContext ctx(m, n);
    if (!(param > 0)) throw ParameterError("catalog parameter must be positive");
    const double M = ctx.M();
    ClosedFormValue out{0, "", m, n, param};
    // pi^p / Gamma(q) with the pole branch giving an exact zero
    auto ratio = [](double p, double q) { return isGammaPole(q) ? 0.0 : std::pow(kPi, p) / gammaFn(q); };
    const bool ball = shape == Shape::Superball || shape == Shape::Supersphere;
    if (ball && kind == Kind::Volume) {
        out.formula = "superball-volume";
        out.value = ratio(M / 2, M / 2 + 1) * std::pow(param, M);
    } else if (ball) {
        out.formula = "supersphere-area";
        out.value = 2 * ratio(M / 2, M / 2) * std::pow(param, M - 1);
    } else if (shape == Shape::Paraboloid && kind == Kind::Volume) {
        out.formula = "paraboloid-volume";
        // zero branch M in -2N+1, wider than the poles of Gamma((M+3)/2)
        out.value = ctx.M() % 2 != 0 && ctx.M() <= -1 ? 0.0 : ratio((M - 1) / 2, (M + 3) / 2) * std::pow(param, (M + 1) / 2);
    } else if (shape == Shape::Paraboloid) {
        out.formula = "paraboloid-area";
        // 2F1 / Gamma(c) stays finite at c = -k: (a)_{k+1} (b)_{k+1} z^{k+1} / (k+1)! 2F1(a+k+1, b+k+1; k+2; z)
        const double a = -0.5, b = (M - 1) / 2, c = (M + 1) / 2, z = -4 * param;
        double regularized;
        if (isGammaPole(c)) {
            const int k = static_cast<int>(-c);
            double f = 1;
            for (int i = 0; i <= k; ++i) f *= (a + i) * (b + i) * z / (i + 1);
            regularized = f * gauss2F1(a + k + 1, b + k + 1, k + 2, z);
        } else {
            regularized = gauss2F1(a, b, c, z) / gammaFn(c);
        }
        out.value = std::pow(kPi, b) * std::pow(param, b) * regularized;
    } else if (kind == Kind::Volume) {
        out.formula = "hyperboloid-volume";
        const double pre = ratio((M - 1) / 2, (M + 1) / 2);
        out.value = pre == 0 ? 0.0 : 2 * param * pre * gauss2F1((1 - M) / 2, 0.5, 1.5, -param * param);
    } else {
        out.formula = "hyperboloid-area";
        const double pre = ratio((M - 1) / 2, (M - 1) / 2);
        out.value = pre == 0 ? 0.0
                             : 4 * param * pre * appellF1(0.5, -0.5, (3 - M) / 2, 1.5, -2 * param * param, -param * param);
    }
    return out;
}

double pizzetti(const SuperFunction& p) {
    if (!p.isPolynomial()) throw ParameterError("pizzetti needs a polynomial");
    const SuperContext& ctx = p.context();
    const double halfM = ctx.M() / 2.0;
    const std::vector<double> origin(ctx.m, 0.0);
    double sum = 0, scale = 1;  // 4^j j!
    SuperFunction lap = p;
    for (int j = 0; !lap.isZero(); ++j) {
        if (!isGammaPole(j + halfM)) {
            const double v = lap.evalAt(origin).coeff(0).toDouble();
            sum += (j % 2 ? -1 : 1) * 2 * std::pow(kPi, halfM) / (scale * gammaFn(j + halfM)) * v;
        }
        lap = superLaplace(lap);
        scale *= 4.0 * (j + 1);
    }
    return sum;
}

}  // namespace superint
