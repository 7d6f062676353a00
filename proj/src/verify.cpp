#include "superint/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "superint/distrib.hpp"
#include "superint/errors.hpp"
#include "superint/greenkernel.hpp"
#include "superint/integrate.hpp"
#include "superint/jet.hpp"
#include "superint/special.hpp"

namespace superint {

namespace {

constexpr double kPi = std::numbers::pi;

// worst deviation relative to tolerance, and where it happened
class Tally {
public:
    void check(double deviation, double tolerance, const std::string& where) {
        ++checks_;
        const double ratio = std::isfinite(deviation) ? deviation / tolerance : INFINITY;
        if (ratio > worst_ || checks_ == 1) {
            worst_ = ratio;
            where_ = where;
            deviation_ = deviation;
        }
    }
    void fail(const std::string& where) { check(INFINITY, 1, where); }

    void finish(CriterionResult& r) const {
        r.checks = checks_;
        r.worst = worst_;
        r.pass = checks_ > 0 && worst_ <= 1;
        std::ostringstream s;
        s << checks_ << " checks, worst " << where_ << " deviation " << deviation_;
        r.detail = s.str();
    }

private:
    int checks_ = 0;
    double worst_ = 0, deviation_ = 0;
    std::string where_;
};

std::string label(int m, int n) { return "(" + std::to_string(m) + "|" + std::to_string(n) + ")"; }

std::string label(int m, int n, const char* key, double v) {
    std::ostringstream s;
    s << label(m, n) << " " << key << "=" << v;
    return s.str();
}

IntegrateOptions baseOptions(const VerifyOptions& v) {
    IntegrateOptions o;
    o.threads = v.threads;
    return o;
}

// total degree counts the fermionic grade; parity 0 even, 1 odd, -1 any
SuperFunction randomPolynomial(const SuperContext& c, std::mt19937& rng, int degree, int parity = -1) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::bernoulli_distribution keep(0.35);
    SuperFunction f(c);
    for (Blade b = 0; b <= c.topBlade(); ++b) {
        const int grade = bladeGrade(b);
        if (grade > degree || (parity >= 0 && grade % 2 != parity)) continue;
        if (b != 0 && !keep(rng)) continue;
        ScalarExpr e(0);
        // monomials x^a with |a| <= degree - grade, enumerated as mixed-radix counters
        std::vector<int> a(c.m, 0);
        const int d = degree - grade;
        for (;;) {
            int total = 0;
            for (int v : a) total += v;
            if (total <= d && keep(rng)) {
                ScalarExpr mono(coef(rng));
                for (int j = 0; j < c.m; ++j)
                    if (a[j] > 0) mono = mono * pow(ScalarExpr::var(j + 1), Coeff(a[j]));
                e = e + mono;
            }
            int j = 0;
            while (j < c.m && ++a[j] > d) a[j++] = 0;
            if (j == c.m) break;
        }
        f = f + SuperFunction::monomial(c, b, e);
    }
    return f;
}

double ballVolume(double M, double R) {
    const double q = M / 2 + 1;
    if (q <= 0 && q == std::floor(q)) return 0;
    return std::pow(kPi, M / 2) / std::tgamma(q) * std::pow(R, M);
}

double sphereAreaOracle(double M, double R) {
    const double q = M / 2;
    if (q <= 0 && q == std::floor(q)) return 0;
    return 2 * std::pow(kPi, M / 2) / std::tgamma(q) * std::pow(R, M - 1);
}

void superballs(Tally& t, const VerifyOptions& v, Kind kind) {
    const auto opt = baseOptions(v);
    const Shape shape = kind == Kind::Volume ? Shape::Superball : Shape::Supersphere;
    for (auto [m, n] : {std::pair{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {4, 1}, {3, 2}, {5, 2}})
        for (double R : {0.5, 1.0, 2.0}) {
            const double M = m - 2 * n;
            const double want = kind == Kind::Volume ? ballVolume(M, R) : sphereAreaOracle(M, R);
            t.check(std::abs(shapeIntegral(shape, kind, m, n, R, opt).value - want), 1e-8, label(m, n, "R", R));
        }
    const auto zeros = kind == Kind::Volume ? std::vector<std::pair<int, int>>{{2, 2}, {4, 3}}
                                            : std::vector<std::pair<int, int>>{{2, 1}, {4, 2}, {2, 2}};
    for (auto [m, n] : zeros)
        for (double R : {0.5, 1.0, 2.0})
            t.check(std::abs(shapeIntegral(shape, kind, m, n, R, opt).value), 1e-10, label(m, n, "R", R) + " zero branch");
}

void relative(Tally& t, double got, double want, double tol, const std::string& where) {
    t.check(std::abs(got - want) / std::max(1.0, std::abs(want)), tol, where);
}

void paraboloids(Tally& t, const VerifyOptions& v) {
    const auto opt = baseOptions(v);
    auto engine = [&](Kind k, int m, int n, double h) { return shapeIntegral(Shape::Paraboloid, k, m, n, h, opt).value; };
    relative(t, engine(Kind::Volume, 2, 0, 1), 4.0 / 3, 1e-6, "volume (2|0)");
    relative(t, engine(Kind::Area, 2, 0, 1), std::sqrt(5.0) + std::asinh(2.0) / 2, 1e-6, "area (2|0)");
    relative(t, engine(Kind::Volume, 3, 0, 1), kPi / 2, 1e-6, "volume (3|0)");
    relative(t, engine(Kind::Area, 3, 0, 1), kPi / 6 * (std::pow(5.0, 1.5) - 1), 1e-6, "area (3|0)");
    for (auto [m, n] : {std::pair{3, 1}, {4, 1}})
        for (Kind k : {Kind::Volume, Kind::Area})
            for (double h : {0.5, 1.0, 2.0})
                relative(t, engine(k, m, n, h), catalog(Shape::Paraboloid, k, m, n, h).value, 1e-6,
                         kindName(k) + " " + label(m, n, "h", h));
}

void hyperboloids(Tally& t, const VerifyOptions& v) {
    const auto opt = baseOptions(v);
    auto engine = [&](Kind k, int m, int n, double h) { return shapeIntegral(Shape::Hyperboloid, k, m, n, h, opt).value; };
    relative(t, engine(Kind::Volume, 2, 0, 1), 2 * (std::sqrt(2.0) + std::asinh(1.0)), 1e-6, "volume (2|0)");
    relative(t, engine(Kind::Volume, 3, 0, 1), 8 * kPi / 3, 1e-6, "volume (3|0)");
    relative(t, engine(Kind::Area, 3, 0, 1), kPi * (2 * std::sqrt(3.0) + std::sqrt(2.0) * std::asinh(std::sqrt(2.0))), 1e-6,
             "area (3|0)");
    for (auto [m, n] : {std::pair{3, 1}, {4, 1}})
        for (Kind k : {Kind::Volume, Kind::Area})
            for (double h : {0.5, 1.0, 2.0})
                relative(t, engine(k, m, n, h), catalog(Shape::Hyperboloid, k, m, n, h).value, 1e-5,
                         kindName(k) + " " + label(m, n, "h", h));
    for (auto [m, n] : {std::pair{3, 1}, {5, 2}, {5, 3}})
        for (double h : {0.5, 1.0})
            t.check(std::abs(engine(Kind::Area, m, n, h)), 1e-10, "area " + label(m, n, "h", h) + " zero branch");
}

void pizzettiSuite(Tally& t, const VerifyOptions& v) {
    std::mt19937 rng(v.seed + 5);
    for (auto [m, n] : {std::pair{2, 1}, {3, 1}, {4, 2}}) {
        const SuperContext c(m, n);
        for (int i = 0; i < 20; ++i) {
            const auto p = randomPolynomial(c, rng, 1 + i % 6);
            const auto [series, engine] = pizzettiCompare(p);
            t.check(std::abs(series - engine) / (1 + std::abs(engine)), 1e-7, label(m, n) + " #" + std::to_string(i));
        }
    }
}

// even phase with a nonconstant polynomial body
SuperFunction randomPhase(const SuperContext& c, std::mt19937& rng) {
    SuperFunction g = randomPolynomial(c, rng, 3, 0);
    return g + SuperFunction(c, ScalarExpr::var(1) * ScalarExpr::var(1) + ScalarExpr::var(c.m));
}

void symbolicSuite(Tally& t, const VerifyOptions& v) {
    std::mt19937 rng(v.seed + 6);
    auto exact = [&](bool ok, const std::string& where) { t.check(ok ? 0 : 1, 0.5, where); };
    for (int i = 0; i < 50; ++i) {
        const SuperContext c(1 + i % 3, 1 + i % 2);
        const auto g = randomPhase(c, rng);
        const int j = i % 4;
        long long fact = 1;
        for (int k = 2; k <= j; ++k) fact *= k;
        const auto gj = pow(g, static_cast<unsigned>(j));
        const auto lhs = multiplySF(expandDelta(g, j), gj);
        const auto rhs = scaleExpansion(expandDelta(g, 0), ScalarExpr(Coeff(j % 2 ? -fact : fact)));
        exact(equivalent(lhs, rhs, 0), "delSup i #" + std::to_string(i));
        exact(multiplySF(expandDelta(g, j), gj * g).deltaTerms.empty(), "delSup ii #" + std::to_string(i));
        const auto neg = negatePhase(expandDelta(-g, j));
        exact(equivalent(neg, scaleExpansion(expandDelta(g, j), ScalarExpr(Coeff(j % 2 ? -1 : 1))), 0),
              "minus #" + std::to_string(i));
    }
    for (int i = 0; i < 50; ++i) {
        const SuperContext c(1 + i % 3, 1 + i % 2);
        const auto F = randomPolynomial(c, rng, 4), G = randomPolynomial(c, rng, 4);
        exact(equivalent(star(star(F)), F, 0), "star involution #" + std::to_string(i));
        for (int k = 1; k <= c.fermions(); ++k) {
            const auto leibniz = ferPartial(F * G, k) - (ferPartial(F, k) * G + star(F) * ferPartial(G, k));
            exact(leibniz.isZero(), "Leibniz #" + std::to_string(i) + " q" + std::to_string(k));
        }
    }
}

void phaseInvariance(Tally& t, const VerifyOptions& v) {
    for (auto [m, n] : {std::pair{2, 1}, {3, 1}, {4, 1}, {3, 2}}) {
        const SuperContext c(m, n);
        const double R = 1.3;
        const auto one = SuperFunction(c, ScalarExpr(1));
        const auto quadratic = -superSquare(c) - SuperFunction(c, ScalarExpr(R * R));
        const auto modulus = superAbs(c) - SuperFunction(c, ScalarExpr(R));
        auto opt = baseOptions(v);
        opt.box = Box::cube(m, 1.25 * R + 0.25);
        const double va = domainIntegral(quadratic, one, {}, opt).value, vb = domainIntegral(modulus, one, {}, opt).value;
        t.check(std::abs(va - vb), 1e-6, "volume " + label(m, n));
        const double aa = surfaceIntegral(quadratic, one, {}, opt).value, ab = surfaceIntegral(modulus, one, {}, opt).value;
        t.check(std::abs(aa - ab), 1e-6, "area " + label(m, n));
    }
}

// polynomial times one of 1, e_j, e`_k
MixedCliffordElement randomCliffordPolynomial(const SuperContext& c, std::mt19937& rng, int degree) {
    MixedCliffordElement r(c);
    for (int term = 0; term < 2; ++term) {
        const auto p = MixedCliffordElement::scalar(randomPolynomial(c, rng, degree));
        const int pick = std::uniform_int_distribution<int>(0, c.m + c.fermions())(rng);
        if (pick == 0)
            r = r + p;
        else if (pick <= c.m)
            r = r + p * MixedCliffordElement::e(c, pick);
        else
            r = r + p * MixedCliffordElement::eFer(c, pick - c.m);
    }
    return r;
}

void stokesSuite(Tally& t, const VerifyOptions& v) {
    std::mt19937 rng(v.seed + 8);
    for (auto [m, n] : {std::pair{2, 0}, {2, 1}, {3, 1}, {2, 2}}) {
        const SuperContext c(m, n);
        auto opt = baseOptions(v);
        opt.backend = Backend::Grid;
        opt.box = Box::cube(m, 1.5);
        const auto g = -superSquare(c) - SuperFunction(c, ScalarExpr(1));
        for (int i = 0; i < 10; ++i) {
            const auto F = randomCliffordPolynomial(c, rng, 3), G = randomCliffordPolynomial(c, rng, 3);
            const auto start = std::chrono::steady_clock::now();
            const auto s = stokesCheck(F, G, g, opt);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const std::string where = label(m, n) + " #" + std::to_string(i);
            t.check(s.deviation, 1e-4, where);
            if (secs > 60) t.fail(where + " exceeded 60 s");
        }
    }
}

std::vector<double> randomPoint(int m, double rlo, double rhi, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> u(rlo, rhi);
    std::vector<double> y(m);
    double norm = 0;
    for (double& x : y) {
        x = nd(rng);
        norm += x * x;
    }
    const double r = u(rng) / std::sqrt(norm);
    for (double& x : y) x *= r;
    return y;
}

void cauchyPompeiuSuite(Tally& t, const VerifyOptions& v) {
    std::mt19937 rng(v.seed + 9);
    for (auto [m, n] : {std::pair{2, 0}, {3, 0}, {2, 1}, {3, 1}}) {
        const SuperContext c(m, n);
        auto opt = baseOptions(v);
        opt.box = Box::cube(m, 1.5);
        const auto g = -superSquare(c) - SuperFunction(c, ScalarExpr(1));
        for (int i = 0; i < 5; ++i) {
            const auto G = randomPolynomial(c, rng, 3);
            for (int p = 0; p < 6; ++p) {
                const bool inside = p < 3;
                const auto y = inside ? randomPoint(m, 0.1, 0.8, rng) : randomPoint(m, 1.2, 1.8, rng);
                const auto r = cauchyPompeiu(G, g, y, opt);
                const std::string where = label(m, n) + " G#" + std::to_string(i) + (inside ? " interior" : " exterior");
                if (r.interior != inside) t.fail(where + " misclassified");
                t.check(r.deviation, inside ? 1e-3 * (1 + std::abs(r.expected)) : 1e-3, where);
            }
        }
    }
}

// Gamma(k + 1/2) and Gamma(1/2 - k) through factorials
double halfIntegerGamma(int k) {
    const double sqrtPi = std::sqrt(kPi);
    auto fact = [](int j) {
        double f = 1;
        for (int i = 2; i <= j; ++i) f *= i;
        return f;
    };
    if (k >= 0) return fact(2 * k) / (std::pow(4.0, k) * fact(k)) * sqrtPi;
    const int j = -k;
    return std::pow(-4.0, j) * fact(j) / fact(2 * j) * sqrtPi;
}

void specialSuite(Tally& t) {
    const std::vector<double> hs{0.25, 0.5, 0.8, 1.0, 1.5, 2.0};
    for (int M = -5; M <= 9; ++M)
        for (double h : hs) {
            const std::string where = "M=" + std::to_string(M) + " h=" + std::to_string(h);
            if (M >= 2) {
                const double b = (M - 1) / 2.0;
                relative(t, gauss2F1(-0.5, b, b + 1, -4 * h), gauss2F1Euler(-0.5, b, b + 1, -4 * h), 1e-8, "paraboloid 2F1 " + where);
            }
            const double a = (1 - M) / 2.0;
            relative(t, gauss2F1(a, 0.5, 1.5, -h * h), gauss2F1Euler(a, 0.5, 1.5, -h * h), 1e-8, "hyperboloid 2F1 " + where);
            const double b2 = (3 - M) / 2.0;
            relative(t, appellF1(0.5, -0.5, b2, 1.5, -2 * h * h, -h * h), appellF1Integral(0.5, -0.5, b2, 1.5, -2 * h * h, -h * h),
                     1e-8, "F1 " + where);
        }
    for (int k = -8; k <= 12; ++k) {
        const double want = halfIntegerGamma(k);
        t.check(std::abs(gammaFn(k + 0.5) - want) / std::abs(want), 1e-13, "Gamma(" + std::to_string(k) + "+1/2)");
    }
}

// s x + small analytic perturbation with random coefficients
ScalarExpr randomAnalytic(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::uniform_real_distribution<double> slope(1, 2);
    const ScalarExpr x = ScalarExpr::var(1);
    ScalarExpr e = ScalarExpr((rng() % 2 ? 1 : -1) * slope(rng)) * x + ScalarExpr(u(rng));
    e = e + ScalarExpr(u(rng)) * sin(x) + ScalarExpr(u(rng)) * cos(ScalarExpr(2) * x);
    e = e + ScalarExpr(u(rng)) * exp(ScalarExpr(0.5) * x) + ScalarExpr(u(rng)) * log(ScalarExpr(3) + x);
    e = e + ScalarExpr(u(rng)) * sqrt(ScalarExpr(2) + x * x) + ScalarExpr(u(rng)) * asinh(x) + ScalarExpr(u(rng)) * x * x * x;
    return e;
}

void jetSuite(Tally& t) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> centre(-0.8, 0.8);
    for (int i = 0; i < 100; ++i) {
        const int order = 1 + i % 8;
        const auto e = randomAnalytic(rng);
        const double x0 = centre(rng);
        const auto u = jetEval(e, {ScalarExpr::var(1)}, x0, order);
        if (std::abs(u[1]) < 0.2) {
            --i;
            continue;
        }
        const auto inv = inverseJet(u);
        // u o t(u) = identity about u0, and t o u = identity about x0
        const auto a = composeJet(u, inv), b = composeJet(inv, u);
        double dev = std::abs(a[0] - u[0]) + std::abs(b[0] - x0);
        dev = std::max({dev, std::abs(a[1] - 1), std::abs(b[1] - 1)});
        for (int k = 2; k <= order; ++k) dev = std::max({dev, std::abs(a[k]), std::abs(b[k])});
        t.check(dev, 1e-12, "inverse jet #" + std::to_string(i));
    }
    for (int m = 1; m <= 5; ++m)
        for (int j = 0; j <= 3; ++j)
            for (double R : {0.7, 1.3}) {
                BosonicIntegralTask task;
                task.m = m;
                task.integrand = ScalarExpr(1);
                ScalarExpr r2(0);
                for (int i = 1; i <= m; ++i) r2 = r2 + ScalarExpr::var(i) * ScalarExpr::var(i);
                task.phaseBody = ScalarExpr(R * R) - r2;
                task.delta = true;
                task.order = j;
                task.box = Box::cube(m, 1.5 * R);
                classify(task);
                // int delta^(j)(R^2 - r^2) r^(m-1) dr = (1/2) (-1)^j d^j/du^j (R^2 - u)^((m-2)/2) at u = 0
                const double p = (m - 2) / 2.0;
                double falling = 1;
                for (int i = 0; i < j; ++i) falling *= p - i;
                const double radial = 0.5 * falling * std::pow(R, 2 * (p - j));
                const double want = 2 * std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0) * radial;
                const double got = evaluate(task).value;
                t.check(std::abs(got - want) / (1 + std::abs(want)), 1e-10, "layer " + label(m, 0) + " j=" + std::to_string(j));
            }
}

}  // namespace

std::string criterionName(int id) {
    static const char* names[] = {"superball volumes",     "supersphere areas",      "super-paraboloid",
                                  "super-hyperboloid",     "Pizzetti equivalence",   "symbolic distribution calculus",
                                  "phase invariance",      "Stokes identity",        "Cauchy-Pompeiu",
                                  "special functions",     "jet machinery"};
    if (id < 1 || id > kCriterionCount) throw ParameterError("no criterion " + std::to_string(id));
    return names[id - 1];
}

CriterionResult runCriterion(int id, const VerifyOptions& opt) {
    CriterionResult r;
    r.id = id;
    r.name = criterionName(id);
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
        switch (id) {
            case 1: superballs(t, opt, Kind::Volume); break;
            case 2: superballs(t, opt, Kind::Area); break;
            case 3: paraboloids(t, opt); break;
            case 4: hyperboloids(t, opt); break;
            case 5: pizzettiSuite(t, opt); break;
            case 6: symbolicSuite(t, opt); break;
            case 7: phaseInvariance(t, opt); break;
            case 8: stokesSuite(t, opt); break;
            case 9: cauchyPompeiuSuite(t, opt); break;
            case 10: specialSuite(t); break;
            case 11: jetSuite(t); break;
        }
        t.finish(r);
    } catch (const Error& e) {
        t.finish(r);
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace superint
