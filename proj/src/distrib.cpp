#include "superint/distrib.hpp"

#include <sstream>

#include "superint/errors.hpp"
#include "superint/polynomial.hpp"

namespace superint {

namespace {

void checkBudget(const SuperContext& ctx, int order) {
    if (order > ctx.n + kExtraDeltaOrders) throw UnsupportedError("delta order above the n + 8 budget");
}

template <class Coef>
void addOrder(std::map<int, Coef>& terms, int j, const Coef& c) {
    if (c.isZero()) return;
    auto it = terms.find(j);
    if (it == terms.end()) {
        terms.emplace(j, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.isZero()) terms.erase(it);
}

bool samePhase(const ScalarExpr& a, const ScalarExpr& b) {
    if (structurallyEqual(a, b)) return true;
    auto pa = toPolynomial(a), pb = toPolynomial(b);
    return pa && pb && *pa == *pb;
}

template <class Coef>
void requireCompatible(const BasicExpansion<Coef>& a, const BasicExpansion<Coef>& b) {
    if (a.ctx != b.ctx) throw ContextError("expansions live in different contexts");
    if (!samePhase(a.phaseBody, b.phaseBody)) throw UnsupportedError("expansions over different phases");
    if (a.heaviside && b.heaviside && a.phaseSign != b.phaseSign) throw UnsupportedError("Heaviside factors with opposite signs");
}

// blade-wise c = q*g0 + r; nullopt unless every coefficient is a polynomial
std::optional<std::pair<SuperFunction, SuperFunction>> divideByPhase(const SuperFunction& c, const Polynomial& g0) {
    const SuperContext& ctx = c.context();
    SuperFunction q(ctx), r(ctx);
    for (auto& [b, e] : c.terms()) {
        auto p = toPolynomial(e);
        if (!p) return std::nullopt;
        auto [qq, rr] = Polynomial::divmod(*p, g0);
        q = q + SuperFunction::monomial(ctx, b, qq.toExpr());
        r = r + SuperFunction::monomial(ctx, b, rr.toExpr());
    }
    return std::make_pair(q, r);
}

std::optional<std::pair<MixedCliffordElement, MixedCliffordElement>> divideByPhase(const MixedCliffordElement& c, const Polynomial& g0) {
    MixedCliffordElement q(c.context()), r(c.context());
    for (auto& [k, f] : c.terms()) {
        auto qr = divideByPhase(f, g0);
        if (!qr) return std::nullopt;
        q.add(k, qr->first);
        r.add(k, qr->second);
    }
    return std::make_pair(q, r);
}

SuperFunction scaleCoef(const SuperFunction& f, const ScalarExpr& c) { return f.scaled(c); }

MixedCliffordElement scaleCoef(const MixedCliffordElement& a, const ScalarExpr& c) {
    return a.mapCoefficients([&](const SuperFunction& f) { return f.scaled(c); });
}

template <class Coef>
BasicExpansion<Coef> reduceImpl(const BasicExpansion<Coef>& d) {
    auto g0 = toPolynomial(d.phaseBody);
    if (!g0 || g0->isConstant()) return d;
    BasicExpansion<Coef> r = d;
    for (int j = r.maxOrder(); j >= 0; --j) {
        auto it = r.deltaTerms.find(j);
        if (it == r.deltaTerms.end()) continue;
        auto qr = divideByPhase(it->second, *g0);
        if (!qr) continue;
        Coef q = qr->first;
        if (qr->second.isZero())
            r.deltaTerms.erase(it);
        else
            it->second = qr->second;
        // g0 delta^(j)(g0) = -j delta^(j-1)(g0), and g0 delta(g0) = 0
        if (j > 0 && !q.isZero()) addOrder(r.deltaTerms, j - 1, scaleCoef(q, ScalarExpr(-j)));
    }
    return r;
}

template <class Coef>
BasicExpansion<Coef> combine(const BasicExpansion<Coef>& a, const BasicExpansion<Coef>& b, int sign) {
    requireCompatible(a, b);
    BasicExpansion<Coef> r = a;
    auto signed_ = [&](const Coef& c) { return sign > 0 ? c : -c; };
    if (b.heaviside) {
        r.phaseSign = b.phaseSign;
        if (r.heaviside) {
            r.heaviside = *r.heaviside + signed_(*b.heaviside);
            if (r.heaviside->isZero()) r.heaviside.reset();
        } else {
            r.heaviside = signed_(*b.heaviside);
        }
    }
    for (auto& [j, c] : b.deltaTerms) addOrder(r.deltaTerms, j, signed_(c));
    return r;
}

bool coefficientZero(const SuperFunction& c, double tol) { return equivalent(c, SuperFunction(c.context()), tol); }

bool coefficientZero(const MixedCliffordElement& c, double tol) {
    for (auto& [k, f] : c.terms())
        if (!coefficientZero(f, tol)) return false;
    return true;
}

template <class Coef>
bool equivalentImpl(const BasicExpansion<Coef>& a, const BasicExpansion<Coef>& b, double tol) {
    if (a.ctx != b.ctx || !samePhase(a.phaseBody, b.phaseBody)) return false;
    if (a.heaviside && b.heaviside && a.phaseSign != b.phaseSign) return false;
    BasicExpansion<Coef> d = reduceImpl(combine(a, b, -1));
    if (d.heaviside && !coefficientZero(*d.heaviside, tol)) return false;
    for (auto& [j, c] : d.deltaTerms)
        if (!coefficientZero(c, tol)) return false;
    return true;
}

}  // namespace

DistributionExpansion expandDelta(const SuperFunction& g, int k) {
    if (!g.isEven()) throw ParityError("delta of a non-even superfunction");
    if (k < 0) throw ParameterError("negative delta order");
    const ScalarExpr g0 = g.body();
    if (g0.isConst()) throw DomainError("delta of a superfunction with constant body");
    DistributionExpansion d{g.context(), g0, 1, std::nullopt, {}};
    const SuperFunction nil = g.nilpotent();
    SuperFunction term(g.context(), ScalarExpr(1));
    for (int j = 0; !term.isZero(); ++j) {
        checkBudget(g.context(), k + j);
        addOrder(d.deltaTerms, k + j, term);
        term = (term * nil).scaled(ScalarExpr(Coeff::ratio(1, j + 1)));
    }
    return d;
}

DistributionExpansion expandHeaviside(const SuperFunction& g, int sign) {
    if (!g.isEven()) throw ParityError("Heaviside of a non-even superfunction");
    if (sign != 1 && sign != -1) throw ParameterError("Heaviside sign must be +1 or -1");
    const SuperContext& ctx = g.context();
    DistributionExpansion d{ctx, g.body(), sign, SuperFunction(ctx, ScalarExpr(1)), {}};
    const SuperFunction nil = g.nilpotent();
    SuperFunction term = nil;  // g_nil^j / j!
    for (int j = 1; !term.isZero(); ++j) {
        // (s g_nil)^j delta^(j-1)(s g0) = s g_nil^j delta^(j-1)(g0)
        addOrder(d.deltaTerms, j - 1, term.scaled(ScalarExpr(sign)));
        term = (term * nil).scaled(ScalarExpr(Coeff::ratio(1, j + 1)));
    }
    return d;
}

DistributionExpansion reduce(const DistributionExpansion& d) { return reduceImpl(d); }
CliffordExpansion reduce(const CliffordExpansion& d) { return reduceImpl(d); }

DistributionExpansion multiplySF(const DistributionExpansion& d, const SuperFunction& f) {
    if (d.ctx != f.context()) throw ContextError("expansion and superfunction live in different contexts");
    DistributionExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (d.heaviside) {
        SuperFunction c = *d.heaviside * f;
        if (!c.isZero()) r.heaviside = c;
    }
    for (auto& [j, c] : d.deltaTerms) addOrder(r.deltaTerms, j, c * f);
    return reduce(r);
}

DistributionExpansion multiplySF(const SuperFunction& f, const DistributionExpansion& d) {
    if (d.ctx != f.context()) throw ContextError("expansion and superfunction live in different contexts");
    DistributionExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (d.heaviside) {
        SuperFunction c = f * *d.heaviside;
        if (!c.isZero()) r.heaviside = c;
    }
    for (auto& [j, c] : d.deltaTerms) addOrder(r.deltaTerms, j, f * c);
    return reduce(r);
}

DistributionExpansion scaleCancel(const SuperFunction& g, const SuperFunction& h, DistKind kind, int orderOrSign,
                                  const std::vector<std::vector<double>>& supportPoints) {
    if (!h.isEven()) throw ParityError("scale factor must be even");
    const bool constant = h.nilpotent().isZero() && h.body().isConst();
    if (constant) {
        if (h.body().value().sign() <= 0) throw RefusalError("scale factor body is not positive");
    } else {
        if (supportPoints.empty()) throw RefusalError("cannot certify the sign of the scale factor body");
        certifyBody(h, supportPoints);
        CompiledExpr body(h.body());
        for (const auto& x : supportPoints)
            if (body(x.data()) <= 0) throw RefusalError("scale factor body is not positive on the support");
    }
    if (kind == DistKind::Heaviside) return expandHeaviside(g, orderOrSign);
    const int k = orderOrSign;
    if (k > 0 && !constant) throw UnsupportedError("derivative orders need a constant scale factor");
    SuperFunction factor = constant ? SuperFunction(h.context(), superint::pow(h.body(), -Coeff(k + 1))) : inverse(h);
    return multiplySF(expandDelta(g, k), factor);
}

DistributionExpansion negatePhase(const DistributionExpansion& d) {
    DistributionExpansion r = d;
    r.phaseBody = canonical(-d.phaseBody);
    r.phaseSign = -d.phaseSign;
    for (auto& [j, c] : r.deltaTerms)
        if (j % 2) c = -c;
    return r;
}

DistributionExpansion diffExpansion(const DistributionExpansion& d, Direction dir) {
    DistributionExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (dir.fermionic) {
        if (d.heaviside) {
            SuperFunction c = ferPartial(*d.heaviside, dir.index);
            if (!c.isZero()) r.heaviside = c;
        }
        for (auto& [j, c] : d.deltaTerms) addOrder(r.deltaTerms, j, ferPartial(c, dir.index));
        return r;
    }
    const int k = dir.index;
    const SuperFunction dg(d.ctx, diff(d.phaseBody, k));
    if (d.heaviside) {
        SuperFunction c = bosPartial(*d.heaviside, k);
        if (!c.isZero()) r.heaviside = c;
        // d/dx H(s g0) = s g0' delta(g0)
        addOrder(r.deltaTerms, 0, (*d.heaviside * dg).scaled(ScalarExpr(d.phaseSign)));
    }
    for (auto& [j, c] : d.deltaTerms) {
        checkBudget(d.ctx, j + 1);
        addOrder(r.deltaTerms, j, bosPartial(c, k));
        addOrder(r.deltaTerms, j + 1, c * dg);
    }
    return r;
}

CliffordExpansion superGradientExpansion(const DistributionExpansion& d) {
    const SuperContext& ctx = d.ctx;
    CliffordExpansion r{ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    auto accumulate = [&](const MixedCliffordElement& gen, const DistributionExpansion& part) {
        if (part.heaviside) {
            MixedCliffordElement c = gen * MixedCliffordElement::scalar(*part.heaviside);
            if (r.heaviside)
                r.heaviside = *r.heaviside + c;
            else
                r.heaviside = c;
            if (r.heaviside->isZero()) r.heaviside.reset();
        }
        for (auto& [j, c] : part.deltaTerms) addOrder(r.deltaTerms, j, gen * MixedCliffordElement::scalar(c));
    };
    for (int j = 1; j <= ctx.m; ++j)
        accumulate(-MixedCliffordElement::e(ctx, j), diffExpansion(d, Direction::bos(j)));
    for (int j = 1; j <= ctx.n; ++j) {
        accumulate(MixedCliffordElement::eFer(ctx, 2 * j).scaled(SuperFunction(ctx, ScalarExpr(2))),
                   diffExpansion(d, Direction::fer(2 * j - 1)));
        accumulate(MixedCliffordElement::eFer(ctx, 2 * j - 1).scaled(SuperFunction(ctx, ScalarExpr(-2))),
                   diffExpansion(d, Direction::fer(2 * j)));
    }
    return r;
}

DistributionExpansion operator+(const DistributionExpansion& a, const DistributionExpansion& b) { return combine(a, b, 1); }
DistributionExpansion operator-(const DistributionExpansion& a, const DistributionExpansion& b) { return combine(a, b, -1); }

DistributionExpansion scaleExpansion(const DistributionExpansion& d, const ScalarExpr& c) {
    DistributionExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (d.heaviside && !d.heaviside->scaled(c).isZero()) r.heaviside = d.heaviside->scaled(c);
    for (auto& [j, f] : d.deltaTerms) addOrder(r.deltaTerms, j, f.scaled(c));
    return r;
}

CliffordExpansion operator*(const MixedCliffordElement& a, const DistributionExpansion& d) {
    CliffordExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (d.heaviside) {
        auto c = a * MixedCliffordElement::scalar(*d.heaviside);
        if (!c.isZero()) r.heaviside = c;
    }
    for (auto& [j, f] : d.deltaTerms) addOrder(r.deltaTerms, j, a * MixedCliffordElement::scalar(f));
    return r;
}

CliffordExpansion operator*(const DistributionExpansion& d, const MixedCliffordElement& a) {
    CliffordExpansion r{d.ctx, d.phaseBody, d.phaseSign, std::nullopt, {}};
    if (d.heaviside) {
        auto c = MixedCliffordElement::scalar(*d.heaviside) * a;
        if (!c.isZero()) r.heaviside = c;
    }
    for (auto& [j, f] : d.deltaTerms) addOrder(r.deltaTerms, j, MixedCliffordElement::scalar(f) * a);
    return r;
}

bool equivalent(const DistributionExpansion& a, const DistributionExpansion& b, double tol) { return equivalentImpl(a, b, tol); }
bool equivalent(const CliffordExpansion& a, const CliffordExpansion& b, double tol) { return equivalentImpl(a, b, tol); }

std::string str(const DistributionExpansion& d) {
    std::ostringstream os;
    bool first = true;
    const std::string phase = d.phaseBody.str();
    if (d.heaviside) {
        os << '[' << d.heaviside->str() << "]*H(" << (d.phaseSign < 0 ? "-(" + phase + ")" : phase) << ')';
        first = false;
    }
    for (auto& [j, c] : d.deltaTerms) {
        if (!first) os << " + ";
        first = false;
        os << '[' << c.str() << "]*delta";
        if (j > 0) os << '^' << j;
        os << '(' << phase << ')';
    }
    if (first) os << '0';
    return os.str();
}

}  // namespace superint
