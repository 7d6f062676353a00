#include "superint/superfun.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "parser_impl.hpp"
#include "superint/errors.hpp"
#include "superint/polynomial.hpp"

namespace superint {

namespace {

void requireSame(const SuperContext& a, const SuperContext& b) {
    if (a != b) throw ContextError("superfunctions live in different contexts");
}

ScalarExpr sumOf(const std::vector<ScalarExpr>& parts) {
    ScalarExpr s;
    for (const ScalarExpr& p : parts) s = s + p;
    return s;
}

}  // namespace

SuperFunction::SuperFunction(const SuperContext& ctx) : ctx_(ctx) {}

SuperFunction::SuperFunction(const SuperContext& ctx, const ScalarExpr& body) : ctx_(ctx) { addTerm(0, canonical(body)); }

SuperFunction SuperFunction::generator(const SuperContext& ctx, int i) {
    if (i < 1 || i > ctx.fermions()) throw ContextError("fermionic index out of range");
    return monomial(ctx, Blade(1) << (i - 1), ScalarExpr(1));
}

SuperFunction SuperFunction::coordinate(const SuperContext& ctx, int j) {
    if (j < 1 || j > ctx.m) throw ContextError("bosonic index out of range");
    return SuperFunction(ctx, ScalarExpr::var(j));
}

SuperFunction SuperFunction::monomial(const SuperContext& ctx, Blade b, const ScalarExpr& c) {
    if ((b & ~ctx.topBlade()) != 0) throw ContextError("blade outside the context");
    SuperFunction f(ctx);
    f.addTerm(b, canonical(c));
    return f;
}

SuperFunction SuperFunction::fromGrassmann(const SuperContext& ctx, const GrassmannElement& g) {
    if (g.n() != ctx.n) throw ContextError("Grassmann element has a different n");
    SuperFunction f(ctx);
    for (auto& [b, c] : g.terms()) f.addTerm(b, ScalarExpr(c));
    return f;
}

void SuperFunction::addTerm(Blade b, const ScalarExpr& c) {
    if (c.isZero()) return;
    auto it = terms_.find(b);
    if (it == terms_.end()) {
        terms_.emplace(b, c);
        return;
    }
    it->second = canonical(it->second + c);
    if (it->second.isZero()) terms_.erase(it);
}

void SuperFunction::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second = canonical(it->second);
        if (it->second.isZero())
            it = terms_.erase(it);
        else
            ++it;
    }
}

ScalarExpr SuperFunction::component(Blade b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? ScalarExpr() : it->second;
}

SuperFunction SuperFunction::nilpotent() const {
    SuperFunction r = *this;
    r.terms_.erase(0);
    return r;
}

bool SuperFunction::isEven() const {
    for (auto& [b, c] : terms_)
        if (bladeGrade(b) % 2) return false;
    return true;
}

bool SuperFunction::isOdd() const {
    for (auto& [b, c] : terms_)
        if (bladeGrade(b) % 2 == 0) return false;
    return true;
}

bool SuperFunction::isPolynomial() const {
    for (auto& [b, c] : terms_)
        if (!toPolynomial(c)) return false;
    return true;
}

SuperFunction SuperFunction::operator-() const {
    SuperFunction r(ctx_);
    for (auto& [b, c] : terms_) r.terms_.emplace(b, canonical(-c));
    return r;
}

SuperFunction operator+(const SuperFunction& a, const SuperFunction& b) {
    requireSame(a.ctx_, b.ctx_);
    SuperFunction r = a;
    for (auto& [bl, c] : b.terms_) r.addTerm(bl, c);
    return r;
}

SuperFunction operator-(const SuperFunction& a, const SuperFunction& b) { return a + (-b); }

SuperFunction operator*(const SuperFunction& a, const SuperFunction& b) {
    requireSame(a.ctx_, b.ctx_);
    std::map<Blade, std::vector<ScalarExpr>> acc;
    for (auto& [ba, ca] : a.terms_)
        for (auto& [bb, cb] : b.terms_) {
            int s = bladeProductSign(ba, bb);
            if (s == 0) continue;
            acc[ba | bb].push_back(s > 0 ? ca * cb : -(ca * cb));
        }
    SuperFunction r(a.ctx_);
    for (auto& [bl, parts] : acc) r.terms_.emplace(bl, sumOf(parts));
    r.normalize();
    return r;
}

SuperFunction SuperFunction::scaled(const ScalarExpr& c) const {
    SuperFunction r(ctx_);
    for (auto& [b, v] : terms_) r.terms_.emplace(b, c * v);
    r.normalize();
    return r;
}

SuperFunction SuperFunction::star() const {
    SuperFunction r(ctx_);
    for (auto& [b, c] : terms_) r.terms_.emplace(b, starSign(b) > 0 ? c : canonical(-c));
    return r;
}

GrassmannElement SuperFunction::evalAt(std::span<const double> x) const {
    GrassmannElement g(ctx_.n);
    for (auto& [b, c] : terms_) g = g + GrassmannElement::monomial(ctx_.n, b, Coeff(c.evalAt(x)));
    return g;
}

std::string SuperFunction::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [b, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (b == 0) {
            os << c.str();
        } else {
            os << '(' << c.str() << ")*" << bladeString(b);
        }
    }
    return os.str();
}

SuperFunction smul(const SuperFunction& a, const SuperFunction& b) { return a * b; }
SuperFunction sadd(const SuperFunction& a, const SuperFunction& b) { return a + b; }
SuperFunction star(const SuperFunction& f) { return f.star(); }

bool equivalent(const SuperFunction& a, const SuperFunction& b, double tol) {
    if (a.context() != b.context()) return false;
    SuperFunction d = a - b;
    if (d.isZero()) return true;
    if (d.isPolynomial()) return false;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-1.7, 1.7);
    std::vector<double> x(a.context().m);
    int ok = 0;
    for (int trial = 0; trial < 200 && ok < 12; ++trial) {
        for (double& v : x) v = U(rng);
        try {
            GrassmannElement ga = a.evalAt(x), gb = b.evalAt(x), gd = ga - gb;
            for (auto& [bl, c] : gd.terms()) {
                double scale = 1 + std::fabs(ga.coeff(bl).toDouble()) + std::fabs(gb.coeff(bl).toDouble());
                if (std::fabs(c.toDouble()) > tol * scale) return false;
            }
            ++ok;
        } catch (const DomainError&) {
        }
    }
    if (ok == 0) throw DomainError("no sample point where both superfunctions evaluate");
    return true;
}

SuperFunction bosPartial(const SuperFunction& f, int j) {
    if (j < 1 || j > f.context().m) throw ContextError("bosonic index out of range");
    SuperFunction r(f.context());
    for (auto& [b, c] : f.terms()) r = r + SuperFunction::monomial(f.context(), b, diff(c, j));
    return r;
}

SuperFunction ferPartial(const SuperFunction& f, int j) {
    if (j < 1 || j > f.context().fermions()) throw ContextError("fermionic index out of range");
    const Blade bit = Blade(1) << (j - 1);
    SuperFunction r(f.context());
    for (auto& [b, c] : f.terms()) {
        if (!(b & bit)) continue;
        int before = std::popcount(b & (bit - 1));
        r = r + SuperFunction::monomial(f.context(), b & ~bit, before % 2 ? -c : c);
    }
    return r;
}

ScalarExpr AnalyticFn::apply(const ScalarExpr& t) const {
    if (op == Op::Pow) return superint::pow(t, p);
    return ScalarExpr::func(op, t);
}

SuperFunction pow(const SuperFunction& a, unsigned k) {
    SuperFunction r(a.context(), ScalarExpr(1)), base = a;
    while (k) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return r;
}

SuperFunction compose(const AnalyticFn& f, const SuperFunction& a) {
    if (!a.isEven()) throw ParityError("compose needs an even argument");
    const ScalarExpr a0 = a.body();
    const SuperFunction nil = a.nilpotent();
    ScalarExpr deriv = f.apply(ScalarExpr::var(1));
    SuperFunction result(a.context()), nilPow(a.context(), ScalarExpr(1));
    Rational fact(1);
    for (int j = 0; !nilPow.isZero(); ++j) {
        if (j > 0) fact *= j;
        ScalarExpr c = substitute(deriv, {a0}) / ScalarExpr(Coeff(fact));
        result = result + nilPow.scaled(c);
        nilPow = nilPow * nil;
        deriv = diff(deriv, 1);
    }
    return result;
}

SuperFunction powerSF(const SuperFunction& a, const Coeff& p) {
    if (!a.isEven()) throw ParityError("power needs an even argument");
    const ScalarExpr a0 = a.body();
    const SuperFunction nil = a.nilpotent();
    SuperFunction result(a.context()), nilPow(a.context(), ScalarExpr(1));
    Coeff falling(1);  // p(p-1)...(p-j+1)/j!
    for (int j = 0; !nilPow.isZero(); ++j) {
        if (j > 0) falling = falling * (p - Coeff(j - 1)) / Coeff(j);
        if (falling.isZero()) break;
        result = result + nilPow.scaled(ScalarExpr(falling) * superint::pow(a0, p - Coeff(j)));
        nilPow = nilPow * nil;
    }
    return result;
}

SuperFunction inverse(const SuperFunction& h) {
    if (!h.isEven()) throw ParityError("inverse needs an even argument");
    const ScalarExpr h0 = h.body();
    if (h0.isZero()) throw DomainError("inverse of a superfunction with zero body");
    const ScalarExpr inv0 = ScalarExpr(1) / h0;
    const SuperFunction q = h.nilpotent().scaled(-inv0);
    SuperFunction sum(h.context()), term(h.context(), ScalarExpr(1));
    while (!term.isZero()) {
        sum = sum + term;
        term = term * q;
    }
    return sum.scaled(inv0);
}

void certifyBody(const SuperFunction& h, const std::vector<std::vector<double>>& points, double threshold) {
    CompiledExpr body(h.body());
    for (const auto& x : points) {
        double v;
        try {
            v = body(x.data());
        } catch (const DomainError&) {
            throw RefusalError("body cannot be evaluated at a support point");
        }
        if (!(std::fabs(v) > threshold)) throw RefusalError("body too close to zero on the support");
    }
}

SuperVectorField::SuperVectorField(const SuperContext& c)
    : ctx(c), bos(c.m, SuperFunction(c)), fer(c.fermions(), SuperFunction(c)) {}

SuperVectorField SuperVectorField::coordinate(const SuperContext& c) {
    SuperVectorField v(c);
    for (int j = 1; j <= c.m; ++j) v.bos[j - 1] = SuperFunction::coordinate(c, j);
    for (int i = 1; i <= c.fermions(); ++i) v.fer[i - 1] = SuperFunction::generator(c, i);
    return v;
}

SuperVectorField SuperVectorField::scaled(const SuperFunction& a) const {
    SuperVectorField r = *this;
    for (auto& f : r.bos) f = a * f;
    for (auto& f : r.fer) f = a * f;
    return r;
}

bool SuperVectorField::isZero() const {
    for (auto& f : bos)
        if (!f.isZero()) return false;
    for (auto& f : fer)
        if (!f.isZero()) return false;
    return true;
}

SuperVectorField operator+(const SuperVectorField& a, const SuperVectorField& b) {
    requireSame(a.ctx, b.ctx);
    SuperVectorField r = a;
    for (std::size_t i = 0; i < r.bos.size(); ++i) r.bos[i] = r.bos[i] + b.bos[i];
    for (std::size_t i = 0; i < r.fer.size(); ++i) r.fer[i] = r.fer[i] + b.fer[i];
    return r;
}

SuperVectorField operator-(const SuperVectorField& a, const SuperVectorField& b) {
    return a + b.scaled(SuperFunction(b.ctx, ScalarExpr(-1)));
}

SuperFunction vsquare(const SuperVectorField& v) {
    SuperFunction r(v.ctx);
    for (const auto& f : v.bos) {
        if (!f.isEven()) throw ParityError("bosonic components must be even");
        r = r - f * f;
    }
    for (const auto& f : v.fer)
        if (!f.isOdd()) throw ParityError("fermionic components must be odd");
    for (int j = 1; j <= v.ctx.n; ++j) r = r + v.fer[2 * j - 2] * v.fer[2 * j - 1];
    return r;
}

SuperFunction modulusSF(const SuperVectorField& v) { return powerSF(-vsquare(v), Coeff::ratio(1, 2)); }

SuperVectorField superGradient(const SuperFunction& g) {
    if (!g.isEven()) throw ParityError("super gradient needs an even superfunction");
    const SuperContext& c = g.context();
    SuperVectorField v(c);
    const SuperFunction two(c, ScalarExpr(2)), mtwo(c, ScalarExpr(-2));
    for (int j = 1; j <= c.m; ++j) v.bos[j - 1] = -bosPartial(g, j);
    for (int j = 1; j <= c.n; ++j) {
        v.fer[2 * j - 1] = two * ferPartial(g, 2 * j - 1);
        v.fer[2 * j - 2] = mtwo * ferPartial(g, 2 * j);
    }
    return v;
}

SuperFunction superLaplace(const SuperFunction& f) {
    const SuperContext& c = f.context();
    SuperFunction r(c);
    for (int j = 1; j <= c.n; ++j) r = r + ferPartial(ferPartial(f, 2 * j), 2 * j - 1).scaled(ScalarExpr(4));
    for (int j = 1; j <= c.m; ++j) r = r - bosPartial(bosPartial(f, j), j);
    return r;
}

SuperFunction superSquare(const SuperContext& ctx) { return vsquare(SuperVectorField::coordinate(ctx)); }

SuperFunction superAbs(const SuperContext& ctx) { return modulusSF(SuperVectorField::coordinate(ctx)); }

namespace {

int generatorIndex(const std::string& name) {
    if (name.size() < 2 || name[0] != 'q' || name.size() > 4) return 0;
    for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
    return std::stoi(name.substr(1));
}

struct SuperBuilder {
    using Value = SuperFunction;
    SuperContext ctx;

    bool isFunction(const std::string& s) const {
        return s == "exp" || s == "log" || s == "sqrt" || s == "sin" || s == "cos" || s == "asinh" || s == "abs";
    }
    Value number(const Coeff& c, std::size_t) { return SuperFunction(ctx, ScalarExpr(c)); }
    Value ident(const std::string& name, std::size_t off) {
        if (name == "X2") return superSquare(ctx);
        if (name == "ABSX") return superAbs(ctx);
        if (int k = detail::variableIndex(name); k >= 1 && k <= ctx.m) return SuperFunction::coordinate(ctx, k);
        if (int k = generatorIndex(name); k >= 1 && k <= ctx.fermions()) return SuperFunction::generator(ctx, k);
        throw UnknownIdentifier("unknown identifier '" + name + "' at offset " + std::to_string(off));
    }
    Value call(const std::string& f, const Value& a, std::size_t off) {
        static const std::pair<const char*, Op> table[] = {{"exp", Op::Exp},   {"log", Op::Log}, {"sqrt", Op::Sqrt},
                                                           {"sin", Op::Sin},   {"cos", Op::Cos}, {"asinh", Op::Asinh},
                                                           {"abs", Op::Abs}};
        Op op = Op::Exp;
        for (auto& [n, o] : table)
            if (f == n) op = o;
        if (a.nilpotent().isZero()) return SuperFunction(ctx, ScalarExpr::func(op, a.body()));
        if (op == Op::Abs) throw SyntaxError("abs of a superfunction with a nilpotent part", off);
        return compose(AnalyticFn{op, Coeff(1)}, a);
    }
    Value add(const Value& a, const Value& b, std::size_t) { return a + b; }
    Value sub(const Value& a, const Value& b, std::size_t) { return a - b; }
    Value mul(const Value& a, const Value& b, std::size_t) { return a * b; }
    Value div(const Value& a, const Value& b, std::size_t) {
        if (b.nilpotent().isZero()) return a.scaled(ScalarExpr(1) / b.body());
        return a * inverse(b);
    }
    Value neg(const Value& a, std::size_t) { return -a; }
    Value pow(const Value& a, const Value& e, std::size_t off) {
        if (!e.nilpotent().isZero() || !e.body().isConst()) throw SyntaxError("exponent must be a constant", off);
        const Coeff p = e.body().value();
        if (a.nilpotent().isZero()) return SuperFunction(ctx, superint::pow(a.body(), p));
        if (p.exact() && p.isInteger() && p.sign() >= 0 && p.toInteger() <= 64)
            return superint::pow(a, static_cast<unsigned>(p.toInteger()));
        return powerSF(a, p);
    }
};

}  // namespace

SuperFunction parseSuperFunction(std::string_view text, const SuperContext& ctx) {
    SuperBuilder b{ctx};
    detail::Parser<SuperBuilder> p(text, b);
    return p.parseAll();
}

}  // namespace superint
