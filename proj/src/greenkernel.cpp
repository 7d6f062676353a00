#include "superint/greenkernel.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/factorials.hpp>

#include "superint/errors.hpp"
#include "superint/special.hpp"

namespace superint {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSurfaceGap = 1e-6;
constexpr double kCauchyTolerance = 1e-6;

Coeff halfPower(double a) { return Coeff::ratio(std::llround(2 * a), 4); }

CliffordResult collect(const std::map<CliffordKey, std::vector<BosonicIntegralTask>>& tasks, const IntegrateOptions& opt) {
    CliffordResult out;
    for (auto& [k, ts] : tasks) {
        const IntegralResult r = evaluateAll(ts, opt);
        out.components[k] += r.value;
        out.errorEstimate += r.errorEstimate;
    }
    return out;
}

}  // namespace

double RadialKernel::radial(double r) const {
    const double p = coefficient * std::pow(r, radialPower);
    return logFlag ? p * (std::log(r) + logShift) : p;
}

ScalarExpr RadialKernel::radialExpr(const ScalarExpr& r) const {
    ScalarExpr e = radialPower == 0 ? ScalarExpr(1) : pow(r * r, halfPower(radialPower));
    if (logFlag) e = e * (log(r) + ScalarExpr(logShift));
    return ScalarExpr(coefficient) * e;
}

MixedCliffordElement RadialKernel::element(const SuperContext& ctx, const std::vector<double>& y) const {
    if (static_cast<int>(y.size()) != ctx.m) throw ParameterError("point dimension does not match m");
    std::vector<ScalarExpr> d;
    ScalarExpr r2(0);
    for (int j = 1; j <= ctx.m; ++j) {
        d.push_back(ScalarExpr::var(j) - ScalarExpr(y[j - 1]));
        r2 = r2 + d.back() * d.back();
    }
    const ScalarExpr f = radialExpr(sqrt(r2));
    if (!vector) return MixedCliffordElement::scalar(SuperFunction(ctx, f));
    MixedCliffordElement out(ctx);
    for (int j = 1; j <= ctx.m; ++j) out.add({Blade(1) << (j - 1), {}}, SuperFunction(ctx, d[j - 1] * f));
    return out;
}

std::vector<RadialKernel> phiFamily(int m, int jmax) {
    if (jmax < 1 || jmax > 5) throw UnsupportedError("kernels are tabulated for j <= 5");
    std::vector<RadialKernel> t;
    const double A = sphereArea(m);
    auto scal = [](double c, double a) { return RadialKernel{false, c, a, false, 0}; };
    auto vec = [](double c, double a) { return RadialKernel{true, c, a, false, 0}; };
    auto slog = [](double c, double a, double s) { return RadialKernel{false, c, a, true, s}; };
    auto vlog = [](double c, double a, double s) { return RadialKernel{true, c, a, true, s}; };
    switch (m) {
        case 2:
            t = {vec(-1 / A, -2), slog(-1 / (2 * kPi), 0, 0), vlog(1 / (4 * kPi), 0, -0.5), slog(1 / (8 * kPi), 2, -1),
                 vlog(-1 / (32 * kPi), 2, -1.25)};
            break;
        case 3:
            t = {vec(-1 / A, -3), scal(1 / (4 * kPi), -1), vec(-1 / (8 * kPi), -1), scal(-1 / (8 * kPi), 1),
                 vec(1 / (32 * kPi), 1)};
            break;
        case 4: {
            const double p2 = kPi * kPi;
            t = {vec(-1 / A, -4), scal(1 / (4 * p2), -2), vec(-1 / (8 * p2), -2), slog(-1 / (8 * p2), 0, 0),
                 vlog(1 / (32 * p2), 0, -0.25)};
            break;
        }
        default: throw UnsupportedError("kernels are tabulated for m = 2, 3, 4");
    }
    t.resize(jmax);
    return t;
}

MixedCliffordElement xferVector(const SuperContext& ctx) {
    MixedCliffordElement x(ctx);
    for (int k = 1; k <= ctx.fermions(); ++k)
        x.add({0, {static_cast<std::uint8_t>(k)}}, SuperFunction::monomial(ctx, Blade(1) << (k - 1), ScalarExpr(1)));
    return x;
}

MixedCliffordElement xferPower(const SuperContext& ctx, int p) {
    MixedCliffordElement r = MixedCliffordElement::scalar(SuperFunction(ctx, ScalarExpr(1)));
    const MixedCliffordElement x = xferVector(ctx);
    for (int i = 0; i < p; ++i) r = r * x;
    return r;
}

SuperCauchyKernel nu1(int m, int n) {
    const auto phi = phiFamily(m, 2 * n + 1);
    SuperCauchyKernel K;
    K.ctx = SuperContext(m, n);
    const double pn = std::pow(kPi, n);
    auto fact = [](int k) { return boost::math::factorial<double>(k); };
    for (int k = 0; k <= n - 1; ++k)
        K.terms.push_back({pn * std::pow(2.0, 2 * k + 1) * fact(k) / fact(n - k - 1), phi[2 * k + 1], 2 * n - 2 * k - 1});
    for (int k = 0; k <= n; ++k)
        K.terms.push_back({-pn * std::pow(2.0, 2 * k) * fact(k) / fact(n - k), phi[2 * k], 2 * n - 2 * k});
    return K;
}

MixedCliffordElement SuperCauchyKernel::element(const std::vector<double>& y) const {
    MixedCliffordElement out(ctx);
    for (const auto& t : terms) {
        const SuperFunction c(ctx, ScalarExpr(t.factor));
        out = out + (t.phi.element(ctx, y) * xferPower(ctx, t.xferPower)).scaled(c);
    }
    return out;
}

SuperFunction SuperDiracDelta::fermionicFactor() const {
    const SuperFunction X2 = superSquare(ctx);
    SuperFunction xf2(ctx);
    // x`^2 is the Grassmann part of x^2
    for (Blade b = 1; b <= ctx.topBlade(); ++b)
        if (!X2.component(b).isZero()) xf2 = xf2 + SuperFunction::monomial(ctx, b, X2.component(b));
    SuperFunction r(ctx, ScalarExpr(std::pow(kPi, ctx.n) / boost::math::factorial<double>(ctx.n)));
    for (int i = 0; i < ctx.n; ++i) r = r * xf2;
    return r;
}

double SuperDiracDelta::pair(const SuperFunction& G, const std::vector<double>& y) const {
    if (static_cast<int>(y.size()) != ctx.m) throw ParameterError("point dimension does not match m");
    const SuperFunction p = fermionicFactor() * G;
    return std::pow(kPi, -ctx.n) * evalAt(p.component(ctx.topBlade()), y);
}

SuperDiracDelta superDiracDelta(int m, int n) { return {SuperContext(m, n)}; }

double CliffordResult::component(const CliffordKey& k) const {
    auto it = components.find(k);
    return it == components.end() ? 0.0 : it->second;
}

StokesResult stokesCheck(const MixedCliffordElement& F, const MixedCliffordElement& G, const SuperFunction& g,
                         const IntegrateOptions& opt) {
    if (!opt.box) throw ParameterError("a domain box is required");
    const MixedCliffordElement bulk = diracApply(F, Side::Right) * G + F * diracApply(G, Side::Left);
    const MixedCliffordElement flux = F * embed(superGradient(g)) * G;
    StokesResult s;
    s.lhs = collect(berezinReduce(expandHeaviside(g, -1) * bulk, {}, *opt.box), opt);
    s.rhs = collect(berezinReduce(expandDelta(g, 0) * flux, {}, *opt.box), opt);
    std::map<CliffordKey, bool> keys;
    for (auto& [k, v] : s.lhs.components) keys[k] = true;
    for (auto& [k, v] : s.rhs.components) keys[k] = true;
    for (auto& [k, b] : keys) s.deviation = std::max(s.deviation, std::abs(s.lhs.component(k) - s.rhs.component(k)));
    return s;
}

CauchyPompeiuResult cauchyPompeiu(const SuperFunction& G, const SuperFunction& g, const std::vector<double>& y,
                                  const IntegrateOptions& opt) {
    const SuperContext& ctx = g.context();
    if (G.context() != ctx) throw ContextError("G and g live in different contexts");
    if (static_cast<int>(y.size()) != ctx.m) throw ParameterError("point dimension does not match m");
    if (!opt.box) throw ParameterError("a domain box is required");
    const double g0 = evalAt(g.body(), y);
    if (std::abs(g0) < kSurfaceGap) throw RefusalError("evaluation point lies on the surface");
    const MixedCliffordElement nu = nu1(ctx.m, ctx.n).element(y);
    const MixedCliffordElement surfaceK = nu * embed(superGradient(g)) * MixedCliffordElement::scalar(G);
    const MixedCliffordElement volumeK = nu * diracApply(G, Side::Left);
    IntegrateOptions o = opt;
    o.backend = Backend::Radial;
    o.center = g0 < 0 ? y : std::vector<double>(ctx.m, 0.0);
    if (o.tolerance <= 0) o.tolerance = kCauchyTolerance;
    const CliffordResult surf = collect(berezinReduce(expandDelta(g, 0) * surfaceK, {}, *opt.box), o);
    const CliffordResult vol = collect(berezinReduce(expandHeaviside(g, -1) * volumeK, {}, *opt.box), o);
    CauchyPompeiuResult r;
    r.interior = g0 < 0;
    r.value = surf;
    for (auto& [k, v] : vol.components) r.value.components[k] -= v;
    r.value.errorEstimate += vol.errorEstimate;
    r.expected = r.interior ? evalAt(G.body(), y) : 0.0;
    const CliffordKey scalarKey{0, {}};
    r.deviation = std::abs(r.value.component(scalarKey) - r.expected);
    for (auto& [k, v] : r.value.components)
        if (k != scalarKey) r.deviation = std::max(r.deviation, std::abs(v));
    return r;
}

}  // namespace superint
